//! Subcommand computations and their text and JSON renderings.
//!
//! JSON reports repeat the descriptor header (`version`, `germ`, `r`, `source`, `flags`,
//! `bound`) so that any report can be fed back through `--germ`.

use std::fmt::Write as _;

use latcurve_core::catalog;
use latcurve_core::classifier::{self, CmType, UnimodalFamily, Verdict};
use latcurve_core::cubical::{self, HomologyReport};
use latcurve_core::lattice::{Germ, LatticePoint, WeightGrid};
use latcurve_core::motivic::{self, LaurentSeries, QPoly};
use latcurve_core::spectral::{self, MinimalCycleGroup};
use latcurve_core::Error;
use serde::Serialize;

use crate::descriptor::{self, GermDescriptor, Loaded};
use crate::{CliError, Format};

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    #[serde(flatten)]
    descriptor: &'a GermDescriptor,
    command: &'static str,
    result: T,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn emit<T: Serialize>(l: &Loaded, command: &'static str, result: T) -> String {
    json(&Report {
        descriptor: &l.descriptor,
        command,
        result,
    })
}

/// The region a command works on: the `--bound` override or R(0, c).
fn region(l: &Loaded) -> LatticePoint {
    l.bound.clone().unwrap_or_else(|| l.germ.conductor().clone())
}

fn weights(g: &Germ, bound: &LatticePoint) -> Result<WeightGrid, CliError> {
    Ok(g.weights(bound)?)
}

// ---------------------------------------------------------------------------
// invariants

#[derive(Serialize)]
struct Invariants {
    r: usize,
    multiplicity: LatticePoint,
    conductor: LatticePoint,
    delta: i64,
    min_weight: i64,
    gorenstein: bool,
    eu: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    milnor: Option<i64>,
}

pub fn invariants(l: &Loaded, format: Format) -> Result<String, CliError> {
    let g = &l.germ;
    let w = weights(g, g.conductor())?;
    let hom = cubical::lattice_homology(&w)?;
    let inv = Invariants {
        r: g.r(),
        multiplicity: g.multiplicity().clone(),
        conductor: g.conductor().clone(),
        delta: g.delta(),
        min_weight: hom.min_weight,
        gorenstein: g.is_gorenstein(),
        eu: cubical::euler_characteristic(&hom, g.delta())?,
        milnor: l.plane.then(|| 2 * g.delta() - g.r() as i64 + 1),
    };
    if format == Format::Json {
        return Ok(emit(l, "invariants", inv));
    }
    let mut s = String::new();
    let mut row = |k: &str, v: String| writeln!(s, "{k:<11} {v}").unwrap();
    row("germ", l.name.clone());
    row("r", inv.r.to_string());
    row("m", inv.multiplicity.to_string());
    row("c", inv.conductor.to_string());
    row("delta", inv.delta.to_string());
    row("min w0", inv.min_weight.to_string());
    row("gorenstein", inv.gorenstein.to_string());
    row("eu", inv.eu.to_string());
    if let Some(mu) = inv.milnor {
        row("milnor", mu.to_string());
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// table

#[derive(Serialize)]
struct Table {
    bound: LatticePoint,
    conductor: LatticePoint,
    /// w₀ on R(0, bound), row-major with the last coordinate fastest.
    weights: Vec<i64>,
    semigroup: Vec<LatticePoint>,
}

fn cell(w: i64, in_s: bool, is_c: bool) -> String {
    if is_c {
        format!("[{w}]")
    } else if in_s {
        format!("*{w}")
    } else {
        w.to_string()
    }
}

/// One ℓ₁ × ℓ₂ slice (or the single row when r = 1), rows by ℓ₂ descending.
fn render_slice(
    out: &mut String,
    bound: &LatticePoint,
    c: &LatticePoint,
    value: impl Fn(&LatticePoint) -> (i64, bool),
    tail: &[u32],
) {
    let r = bound.dim();
    let point = |a: u32, b: Option<u32>| {
        let mut v = vec![a];
        v.extend(b);
        v.extend_from_slice(tail);
        LatticePoint::from_slice(&v)
    };
    let rows: Vec<Option<u32>> = if r == 1 {
        vec![None]
    } else {
        (0..=bound.get(1)).rev().map(Some).collect()
    };
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|&b| {
            (0..=bound.get(0))
                .map(|a| {
                    let p = point(a, b);
                    let (w, s) = value(&p);
                    cell(w, s, &p == c)
                })
                .collect()
        })
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(String::len)
        .chain((0..=bound.get(0)).map(|a| a.to_string().len()))
        .max()
        .unwrap_or(1);
    let label = rows
        .iter()
        .flatten()
        .map(|b| b.to_string().len())
        .max()
        .unwrap_or(0);
    for (b, line) in rows.iter().zip(&cells) {
        let tag = b.map_or(String::new(), |b| b.to_string());
        write!(out, "{tag:>label$} |").unwrap();
        for c in line {
            write!(out, " {c:>width$}").unwrap();
        }
        out.push('\n');
    }
    let n = bound.get(0) as usize + 1;
    writeln!(out, "{:>label$} +{}", "", "-".repeat(n * (width + 1))).unwrap();
    write!(out, "{:>label$}  ", "").unwrap();
    for a in 0..=bound.get(0) {
        write!(out, " {a:>width$}").unwrap();
    }
    out.push('\n');
}

pub fn table(l: &Loaded, format: Format) -> Result<String, CliError> {
    let g = &l.germ;
    let bound = region(l);
    let w = weights(g, &bound)?;
    let s = g.semigroup(&bound)?;
    let c = g.conductor();
    if format == Format::Json {
        let t = Table {
            bound: bound.clone(),
            conductor: c.clone(),
            weights: w.grid().values().to_vec(),
            semigroup: s.elements(),
        };
        return Ok(emit(l, "table", t));
    }
    let value = |p: &LatticePoint| (w.get(p).expect("inside"), s.contains(p));
    let mut out = String::new();
    writeln!(out, "w0 of {} on R(0,{bound}); * = semigroup element, [ ] = conductor {c}", l.name)
        .unwrap();
    let r = g.r();
    if r <= 2 {
        render_slice(&mut out, &bound, c, value, &[]);
        return Ok(out);
    }
    let tail_bound = LatticePoint::from_slice(&bound.coords()[2..]);
    for tail in latcurve_core::lattice::Rectangle::from_origin(tail_bound).points() {
        let names: Vec<String> = tail
            .coords()
            .iter()
            .enumerate()
            .map(|(i, x)| format!("l{}={x}", i + 3))
            .collect();
        writeln!(out, "\n{}", names.join(", ")).unwrap();
        render_slice(&mut out, &bound, c, value, tail.coords());
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// homology

#[derive(Serialize)]
struct Homology {
    #[serde(flatten)]
    report: HomologyReport,
    ranks: Vec<usize>,
    eu: i64,
}

pub fn homology(l: &Loaded, format: Format) -> Result<String, CliError> {
    let g = &l.germ;
    let w = weights(g, &region(l))?;
    let report = cubical::lattice_homology(&w)?;
    let eu = cubical::euler_characteristic(&report, g.delta())?;
    let r = g.r();
    let ranks: Vec<usize> = (1..r.max(2)).map(|k| report.total_rank(k)).collect();
    if format == Format::Json {
        return Ok(emit(l, "homology", Homology { report, ranks, eu }));
    }
    let mut s = String::new();
    writeln!(
        s,
        "lattice homology of {} on R(0,{}); levels {}..{}",
        l.name,
        g.conductor(),
        report.min_weight,
        report.max_weight
    )
    .unwrap();
    let ks = report
        .levels
        .iter()
        .map(|lv| lv.groups.len())
        .max()
        .unwrap_or(1);
    write!(s, "{:>5}", "n").unwrap();
    for k in 0..ks {
        write!(s, " {:>5}", format!("H{k}")).unwrap();
    }
    for k in 0..ks {
        write!(s, " {:>5}", format!("U{k}")).unwrap();
    }
    s.push_str("  torsion\n");
    for lv in &report.levels {
        write!(s, "{:>5}", lv.n).unwrap();
        for k in 0..ks {
            write!(s, " {:>5}", lv.groups.get(k).map_or(0, |g| g.rank)).unwrap();
        }
        for k in 0..ks {
            write!(s, " {:>5}", lv.u_ranks.get(k).copied().unwrap_or(0)).unwrap();
        }
        let tors: Vec<String> = lv
            .groups
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.torsion.is_empty())
            .map(|(k, g)| format!("H{k}: {:?}", g.torsion))
            .collect();
        writeln!(s, "  {}", if tors.is_empty() { "-".into() } else { tors.join("; ") }).unwrap();
    }
    for (k, rk) in ranks.iter().enumerate() {
        writeln!(s, "rank H_{} = {rk}", k + 1).unwrap();
    }
    writeln!(s, "eu = {eu}").unwrap();
    Ok(s)
}

// ---------------------------------------------------------------------------
// spectral

#[derive(Debug, Default)]
pub struct SpectralQueries {
    minimal: Vec<(usize, i64)>,
    level: Vec<(u32, usize, i64)>,
}

fn ints(s: &str, n: usize, what: &str) -> Result<Vec<i64>, CliError> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Parse(format!("--{what} {s:?}: expected {n} integers")))?;
    if v.len() != n {
        return Err(CliError::Parse(format!("--{what} {s:?}: expected {n} integers")));
    }
    Ok(v)
}

fn natural(x: i64, what: &str) -> Result<u32, CliError> {
    u32::try_from(x).map_err(|_| CliError::Parse(format!("--{what}: {x} must be nonnegative")))
}

impl SpectralQueries {
    pub fn parse(minimal: &[String], level: &[String]) -> Result<Self, CliError> {
        let mut q = SpectralQueries::default();
        for s in minimal {
            let v = ints(s, 2, "minimal")?;
            q.minimal.push((natural(v[0], "minimal")? as usize, v[1]));
        }
        for s in level {
            let v = ints(s, 3, "level")?;
            q.level
                .push((natural(v[0], "level")?, natural(v[1], "level")? as usize, v[2]));
        }
        Ok(q)
    }

    fn is_empty(&self) -> bool {
        self.minimal.is_empty() && self.level.is_empty()
    }
}

#[derive(Serialize)]
struct LevelRank {
    d: u32,
    k: usize,
    n: i64,
    rank: usize,
}

#[derive(Serialize)]
struct Spectral {
    multiplicity: LatticePoint,
    minimal: Vec<MinimalCycleGroup>,
    /// Nonzero level entries; on the default run these cover every level in R(0, region).
    levels: Vec<LevelRank>,
}

/// 𝔐_{k,n} on the `--bound` grid when given, else on the grid the group needs.
fn minimal_group(l: &Loaded, k: usize, n: i64) -> Result<MinimalCycleGroup, CliError> {
    Ok(match &l.bound {
        Some(b) => spectral::minimal_spectral_cycles(&weights(&l.germ, b)?, k, n)?,
        None => spectral::germ_minimal_spectral_cycles(&l.germ, k, n)?,
    })
}

pub fn spectral(l: &Loaded, q: &SpectralQueries, format: Format) -> Result<String, CliError> {
    let g = &l.germ;
    let r = g.r();
    let mn = g.multiplicity().norm();
    let mut minimal = Vec::new();
    let mut levels = Vec::new();
    if q.is_empty() {
        if mn >= 3 {
            for j in 0..=2 {
                for k in 0..=r.min(2) {
                    let n = k as i64 - j * (mn - 2);
                    minimal.push(minimal_group(l, k, n)?);
                }
            }
        }
        let reg = region(l);
        let w = weights(g, &reg.add(&LatticePoint::ones(r)))?;
        for ((d, n, k), rank) in spectral::pe_univariate(&spectral::pe_series(&w, &reg)?) {
            levels.push(LevelRank { d, k, n, rank });
        }
    } else {
        for &(k, n) in &q.minimal {
            minimal.push(minimal_group(l, k, n)?);
        }
        for &(d, k, n) in &q.level {
            let e = match &l.bound {
                Some(b) => spectral::e1_level(&weights(g, b)?, d, k, n)?,
                None => spectral::germ_e1_level(g, d, k, n)?,
            };
            levels.push(LevelRank {
                d,
                k,
                n,
                rank: e.rank,
            });
        }
    }
    if format == Format::Json {
        let sp = Spectral {
            multiplicity: g.multiplicity().clone(),
            minimal,
            levels,
        };
        return Ok(emit(l, "spectral", sp));
    }
    let mut s = String::new();
    writeln!(s, "E1 data of {} (|m| = {mn})", l.name).unwrap();
    if !minimal.is_empty() || q.is_empty() {
        writeln!(s, "minimal spectral cycles M_{{k,n}}").unwrap();
        if minimal.is_empty() {
            writeln!(s, "  undefined for |m| < 3").unwrap();
        } else {
            writeln!(s, "{:>5} {:>5} {:>5} {:>5} {:>5}", "k", "n", "j", "rank", "max").unwrap();
            for m in &minimal {
                writeln!(s, "{:>5} {:>5} {:>5} {:>5} {:>5}", m.k, m.n, m.j, m.rank, m.max_rank())
                    .unwrap();
            }
        }
    }
    if !levels.is_empty() || q.is_empty() {
        if q.is_empty() {
            writeln!(s, "nonzero level entries (E1_{{-d,d+k}})_{{-2n}} on R(0,{})", region(l))
                .unwrap();
        } else {
            writeln!(s, "level entries (E1_{{-d,d+k}})_{{-2n}}").unwrap();
        }
        writeln!(s, "{:>5} {:>5} {:>5} {:>5}", "d", "k", "n", "rank").unwrap();
        for e in &levels {
            writeln!(s, "{:>5} {:>5} {:>5} {:>5}", e.d, e.k, e.n, e.rank).unwrap();
        }
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// motivic

#[derive(Serialize)]
struct LevelPoly {
    d: u32,
    poly: QPoly,
    text: String,
}

#[derive(Serialize)]
struct Motivic {
    depth: i64,
    /// 𝔭^m_d(q) for d = 0..=depth.
    levels: Vec<LevelPoly>,
    /// f^C(ω) = P^m|_{t_i → ω^{-1}, q → ω²} up to order `depth`.
    omega: LaurentSeries,
}

pub fn motivic(l: &Loaded, depth: i64, format: Format) -> Result<String, CliError> {
    let g = &l.germ;
    // Levels 0..=depth; none when the depth is negative.
    let top = u32::try_from(depth).map_or(0, |d| d + 1);
    let (levels, omega) = match &l.bound {
        Some(b) => {
            let h = g.hilbert(b)?;
            let levels = (0..top)
                .map(|d| motivic::univariate_motivic(&h, d))
                .collect::<Result<Vec<_>, Error>>()?;
            (levels, motivic::omega_substitution(&h, g.conductor(), depth)?)
        }
        None => {
            let levels = (0..top)
                .map(|d| motivic::germ_univariate_motivic(g, d))
                .collect::<Result<Vec<_>, Error>>()?;
            (levels, motivic::germ_omega_substitution(g, depth)?)
        }
    };
    let levels: Vec<LevelPoly> = levels
        .into_iter()
        .enumerate()
        .map(|(d, poly)| LevelPoly {
            d: d as u32,
            text: poly.to_string(),
            poly,
        })
        .collect();
    if format == Format::Json {
        return Ok(emit(l, "motivic", Motivic {
            depth,
            levels,
            omega,
        }));
    }
    let mut s = String::new();
    writeln!(s, "univariate motivic series of {} up to level {depth}", l.name).unwrap();
    for lp in &levels {
        writeln!(s, "  p_{} = {}", lp.d, lp.text).unwrap();
    }
    writeln!(s, "omega substitution f(w), orders {}..{depth}", omega.start).unwrap();
    for o in omega.start..=omega.depth {
        writeln!(s, "  [w^{o}] = {}", omega.coeff(o)).unwrap();
    }
    match omega.ord() {
        Some(o) => writeln!(s, "ord f = {o}").unwrap(),
        None => writeln!(s, "ord f > {depth}").unwrap(),
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// classify

#[derive(Serialize)]
struct Classification {
    cmtype: CmType,
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    unimodal: Option<UnimodalFamily>,
    evidence: Verdict,
}

fn subtypes(v: &[Option<classifier::FiniteSubtype>]) -> String {
    let items: Vec<String> = v
        .iter()
        .map(|s| s.map_or("-".to_string(), |t| format!("{t:?}")))
        .collect();
    format!("[{}]", items.join(", "))
}

fn opt(v: Option<usize>) -> String {
    v.map_or("undefined".to_string(), |x| x.to_string())
}

pub fn classify(l: &Loaded, format: Format) -> Result<String, CliError> {
    let g = &l.germ;
    let v = classifier::classify(g)?;
    let unimodal = if l.plane {
        Some(classifier::classify_unimodal_plane(
            v.cmtype,
            v.homological.min_weight,
            g.delta(),
            true,
        )?)
    } else {
        None
    };
    if format == Format::Json {
        let c = Classification {
            cmtype: v.cmtype,
            verdict: v.cmtype.to_string(),
            unimodal,
            evidence: v,
        };
        return Ok(emit(l, "classify", c));
    }
    let mut s = String::new();
    let agree = [&v.pointwise.cmtype, &v.homological.cmtype, &v.motivic.cmtype]
        .iter()
        .filter(|t| ***t == v.cmtype)
        .count();
    writeln!(s, "germ         {}", l.name).unwrap();
    writeln!(s, "type         {}", v.cmtype).unwrap();
    writeln!(s, "routes       {agree}/3 agree").unwrap();
    let p = &v.pointwise;
    writeln!(
        s,
        "pointwise    w0(m) = {}, w0(2m) = {}, w0(m+e) = {}",
        p.w_m, p.w_2m, p.w_m_plus_e
    )
    .unwrap();
    for (name, ok) in &p.conditions {
        writeln!(s, "               {name}: {ok}").unwrap();
    }
    let h = &v.homological;
    writeln!(
        s,
        "homological  min w0 = {}, M_{{1,0}} = {}, M_{{1,-1}} = {} (max {})",
        h.min_weight,
        opt(h.m_1_0),
        opt(h.m_1_neg1),
        h.max_rank
    )
    .unwrap();
    if !h.branch_min_weights.is_empty() {
        writeln!(
            s,
            "               branch min w0 {:?}, complements {}",
            h.branch_min_weights,
            subtypes(&h.complement_subtypes)
        )
        .unwrap();
    }
    let m = &v.motivic;
    writeln!(
        s,
        "motivic      ord f = {}, mu = {}, pi_(3,2) = {}, pi_(4,2) = {}, pi_(6,3) = {}",
        m.ord_f, m.mu, m.pi_3_2, m.pi_4_2, m.pi_6_3
    )
    .unwrap();
    if !m.branch_ords.is_empty() {
        writeln!(
            s,
            "               branch ord f {:?}, complements {}",
            m.branch_ords,
            subtypes(&m.complement_subtypes)
        )
        .unwrap();
    }
    if let Some(u) = unimodal {
        writeln!(s, "unimodal     {u}").unwrap();
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// catalog

pub fn catalog(spec: Option<&str>, format: Format) -> Result<String, CliError> {
    match spec {
        Some(spec) => {
            let (name, params) = catalog::parse_spec(spec)?;
            let (entry, _) = catalog::get(&name, &params)?;
            Ok(json(&descriptor::export(&entry)))
        }
        None => {
            let fams = catalog::list();
            if format == Format::Json {
                return Ok(json(&fams));
            }
            let mut s = String::new();
            writeln!(s, "{:<6} {:<16} params", "key", "family").unwrap();
            for f in &fams {
                writeln!(s, "{:<6} {:<16} {}", f.key, f.display, f.params).unwrap();
            }
            Ok(s)
        }
    }
}
