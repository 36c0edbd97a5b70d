//! Hand-transcribed weight tables of the ADE and T_{p,q} germs, plus the closed patterns
//! stated for whole families. Cell syntax: `v` plain, `*v` semigroup element, `[*v]` conductor.

use latcurve_core::catalog::get;
use latcurve_core::lattice::LatticePoint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub point: LatticePoint,
    pub weight: i64,
    pub in_semigroup: Option<bool>,
    pub conductor: bool,
}

pub struct Table {
    pub label: String,
    pub germ: (&'static str, Vec<u32>),
    pub cells: Vec<Cell>,
}

fn cell(point: LatticePoint, token: &str, marked: bool) -> Cell {
    let boxed = token.starts_with('[');
    let t = token.trim_matches(|ch| ch == '[' || ch == ']');
    let bold = t.starts_with('*');
    let weight = t.trim_start_matches('*').parse().expect("weight");
    Cell {
        point,
        weight,
        in_semigroup: marked.then_some(bold),
        conductor: boxed,
    }
}

/// Rows listed top to bottom (largest ℓ2 first); `rest` fixes ℓ3, ℓ4, ...
fn block(rows: &str, rest: &[u32]) -> Vec<Cell> {
    let lines: Vec<&str> = rows.split('/').map(str::trim).collect();
    let top = lines.len() as u32 - 1;
    let mut out = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        for (l1, tok) in line.split_whitespace().enumerate() {
            let mut coords = vec![l1 as u32, top - i as u32];
            coords.extend_from_slice(rest);
            out.push(cell(LatticePoint::from_slice(&coords), tok, true));
        }
    }
    out
}

fn row(tokens: &str) -> Vec<Cell> {
    tokens
        .split_whitespace()
        .enumerate()
        .map(|(l, tok)| cell(LatticePoint::from_slice(&[l as u32]), tok, true))
        .collect()
}

fn plain(point: &[u32], weight: i64) -> Cell {
    Cell {
        point: LatticePoint::from_slice(point),
        weight,
        in_semigroup: None,
        conductor: false,
    }
}

fn table(label: &str, name: &'static str, params: &[u32], cells: Vec<Cell>) -> Table {
    Table {
        label: label.to_string(),
        germ: (name, params.to_vec()),
        cells,
    }
}

fn a_even(n: u32) -> Table {
    let cells = (0..=n + 2)
        .map(|l| {
            let w = if l <= n { (l % 2) as i64 } else { (l - n) as i64 };
            Cell {
                point: LatticePoint::from_slice(&[l]),
                weight: w,
                in_semigroup: Some(l % 2 == 0 || l > n),
                conductor: l == n,
            }
        })
        .collect();
    table(&format!("A_{n} pattern"), "A", &[n], cells)
}

fn a_odd(k: u32) -> Table {
    let mut cells = Vec::new();
    for l1 in 0..=k {
        for l2 in 0..=k {
            cells.push(plain(&[l1, l2], (l1 as i64 - l2 as i64).abs()));
        }
    }
    table(&format!("A_{} |l1 - l2|", 2 * k - 1), "A", &[2 * k - 1], cells)
}

fn d_odd(n: u32) -> Table {
    let mut cells = Vec::new();
    for l1 in 0..=n - 1 {
        let col: [(i64, bool); 3] = if l1 == n - 1 {
            [(2, false), (1, false), (0, true)]
        } else if l1 == n - 2 {
            [(1, false), (0, true), (1, false)]
        } else {
            let b = (l1 % 2) as i64;
            let even_inner = l1 % 2 == 0 && l1 >= 2;
            if l1 == 0 {
                [(0, true), (1, false), (2, false)]
            } else {
                [(b, false), (b - 1, even_inner), (b, even_inner)]
            }
        };
        for (l2, &(w, s)) in col.iter().enumerate() {
            cells.push(Cell {
                point: LatticePoint::from_slice(&[l1, l2 as u32]),
                weight: w,
                in_semigroup: Some(s),
                conductor: l1 == n - 1 && l2 == 2,
            });
        }
    }
    table(&format!("D_{n} pattern"), "D", &[n], cells)
}

fn d_even_rule(n: u32) -> Table {
    let k = n / 2;
    let base = |l1: u32, l2: u32| -> i64 {
        if (l1, l2) == (k, k) {
            2
        } else {
            (l1 as i64 - l2 as i64).abs()
        }
    };
    let mut cells = Vec::new();
    for l1 in 0..=k {
        for l2 in 0..=k {
            let eps = if (l1, l2) == (0, 0) { 1 } else { -1 };
            cells.push(plain(&[l1, l2, 0], base(l1, l2)));
            cells.push(plain(&[l1, l2, 1], base(l1, l2) + eps));
            cells.push(plain(&[l1, l2, 2], base(k - l1, k - l2)));
        }
    }
    table(&format!("D_{n} rule"), "D", &[n], cells)
}

fn t3(b: u32) -> Table {
    let head: [[&str; 4]; 5] = [
        ["*0", "1", "0", "1"],
        ["1", "0", "*-1", "0"],
        ["2", "1", "0", "-1"],
        ["3", "2", "1", "0"],
        ["4", "3", "2", "1"],
    ];
    let even: [&str; 5] = ["0", "-1", "*-2", "*-1", "*0"];
    let odd: [&str; 5] = ["1", "0", "-1", "0", "1"];
    let tail: [[&str; 4]; 5] = [
        ["1", "2", "3", "4"],
        ["0", "1", "2", "3"],
        ["*-1", "0", "1", "2"],
        ["0", "*-1", "*0", "1"],
        ["1", "*0", "1", "[*0]"],
    ];
    let mut cells = Vec::new();
    for l2 in 0..5u32 {
        for l1 in 0..=2 * b + 4 {
            let tok = if l1 < 4 {
                head[l2 as usize][l1 as usize]
            } else if l1 <= 2 * b {
                if l1 % 2 == 0 {
                    even[l2 as usize]
                } else {
                    odd[l2 as usize]
                }
            } else {
                tail[l2 as usize][(l1 - 2 * b - 1) as usize]
            };
            cells.push(cell(LatticePoint::from_slice(&[l1, l2]), tok, true));
        }
    }
    table(&format!("T_{{3,{}}} pattern", 2 * b + 3), "T", &[3, 2 * b + 3], cells)
}

/// Bottom-left corner of T_{2a+3,2b+3}; the printed 5x5 corner is stated for large a, b and
/// is compared on R(0, (2a+1, 2b+1)), with semigroup markers only on R(0, (2a, 2b)).
fn t_odd_corner(a: u32, b: u32) -> Table {
    let rows = "0 -1 *-2 -1 *-2 / 1 0 -1 0 -1 / 0 -1 *-2 -1 *-2 / 1 0 -1 0 -1 / *0 1 0 1 0";
    let cells = block(rows, &[])
        .into_iter()
        .filter(|c| c.point.get(0) <= 2 * a + 1 && c.point.get(1) <= 2 * b + 1)
        .map(|mut c| {
            if c.point.get(0) > 2 * a || c.point.get(1) > 2 * b {
                c.in_semigroup = None;
            }
            c
        })
        .collect();
    table(
        &format!("T_{{{},{}}} corner", 2 * a + 3, 2 * b + 3),
        "T",
        &[2 * a + 3, 2 * b + 3],
        cells,
    )
}

const T44: [((u32, u32), &str); 16] = [
    ((0, 3), "4 3 2 3 / 3 2 1 2 / 2 1 2 3 / 3 2 3 4"),
    ((1, 3), "3 2 1 2 / 2 1 0 1 / 1 *0 1 2 / 2 1 2 3"),
    ((2, 3), "2 1 *0 1 / 1 0 *-1 *0 / 2 1 0 1 / 3 2 1 2"),
    ((3, 3), "3 2 1 [*0] / 2 1 *0 1 / 3 2 1 2 / 4 3 2 3"),
    ((0, 2), "3 2 1 2 / 2 1 0 1 / 1 0 1 2 / 2 1 2 3"),
    ((1, 2), "2 1 0 1 / 1 0 -1 0 / 0 *-1 0 1 / 1 0 1 2"),
    ((2, 2), "1 0 *-1 *0 / 0 -1 *-2 *-1 / 1 0 -1 0 / 2 1 0 1"),
    ((3, 2), "2 1 *0 1 / 1 0 *-1 *0 / 2 1 0 1 / 3 2 1 2"),
    ((0, 1), "2 1 2 3 / 1 0 1 2 / 0 -1 0 1 / 1 0 1 2"),
    ((1, 1), "1 *0 1 2 / 0 *-1 0 1 / -1 *-2 *-1 *0 / 0 -1 0 1"),
    ((2, 1), "2 1 0 1 / 1 0 -1 0 / 0 *-1 0 1 / 1 0 1 2"),
    ((3, 1), "3 2 1 2 / 2 1 0 1 / 1 *0 1 2 / 2 1 2 3"),
    ((0, 0), "3 2 3 4 / 2 1 2 3 / 1 0 1 2 / *0 1 2 3"),
    ((1, 0), "2 1 2 3 / 1 0 1 2 / 0 -1 0 1 / 1 0 1 2"),
    ((2, 0), "3 2 1 2 / 2 1 0 1 / 1 0 1 2 / 2 1 2 3"),
    ((3, 0), "4 3 2 3 / 3 2 1 2 / 2 1 2 3 / 3 2 3 4"),
];

const T36: [&str; 5] = [
    "4 3 2 3 4 / 3 2 1 2 3 / 2 1 0 1 2 / 1 0 1 2 3 / *0 1 2 3 4",
    "3 2 1 2 3 / 2 1 0 1 2 / 1 0 -1 0 1 / 0 *-1 0 1 2 / 1 0 1 2 3",
    "2 1 *0 1 2 / 1 0 *-1 0 1 / 0 -1 *-2 *-1 *0 / 1 0 -1 0 1 / 2 1 0 1 2",
    "3 2 1 *0 1 / 2 1 0 *-1 *0 / 1 0 *-1 0 1 / 2 1 0 1 2 / 3 2 1 2 3",
    "4 3 2 1 [*0] / 3 2 1 *0 1 / 2 1 *0 1 2 / 3 2 1 2 3 / 4 3 2 3 4",
];

// (1,2,1) and (2,1,1) are marked as semigroup elements: y - x + x^2 has values (2,1,1).
const D4: [&str; 3] = [
    "2 1 2 / 1 0 1 / *0 1 2",
    "1 *0 1 / 0 *-1 *0 / 1 0 1",
    "2 1 [*0] / 1 *0 1 / 2 1 2",
];

const D6_CORNER: [&str; 3] = [
    "2 1 0 / 1 0 1 / *0 1 2",
    "1 0 *-1 / 0 *-1 0 / 1 0 1",
    "2 1 *0 / 1 *0 1 / 2 1 2",
];

fn stacked(blocks: &[&str]) -> Vec<Cell> {
    blocks
        .iter()
        .enumerate()
        .flat_map(|(l3, rows)| block(rows, &[l3 as u32]))
        .collect()
}

/// Every transcribed table, in the order of the acceptance suite.
pub fn all() -> Vec<Table> {
    let mut out = vec![a_even(2), a_even(4), a_even(6)];
    out.push(table(
        "A_1 on R(0,(3,3))",
        "A",
        &[1],
        block("3 *2 *3 *4 / 2 *1 *2 *3 / 1 [*0] *1 *2 / *0 1 2 3", &[]),
    ));
    out.push(table(
        "A_3 on R(0,(3,3))",
        "A",
        &[3],
        block("3 2 *1 *2 / 2 1 [*0] *1 / 1 *0 1 2 / *0 1 2 3", &[]),
    ));
    out.extend([a_odd(1), a_odd(2), a_odd(3)]);
    out.push(table("D_4", "D", &[4], stacked(&D4)));
    out.extend([d_odd(5), d_odd(7)]);
    out.push(table("D_6 on R(0,(2,2,2))", "D", &[6], stacked(&D6_CORNER)));
    out.push(table("D_8 on R(0,(2,2,2))", "D", &[8], stacked(&D6_CORNER)));
    out.extend([d_even_rule(6), d_even_rule(8)]);
    out.push(table("E_6", "E6", &[], row("*0 1 0 *-1 *0 1 [*0]")));
    out.push(table("E_8", "E8", &[], row("*0 1 0 *-1 0 *-1 *0 1 [*0]")));
    out.push(table(
        "E_7",
        "E7",
        &[],
        block(
            "3 2 1 *0 1 [*0] / 2 1 0 *-1 *0 1 / 1 0 *-1 0 1 2 / *0 1 0 1 2 3",
            &[],
        ),
    ));
    out.push(table(
        "T_{4,4}",
        "T",
        &[4, 4],
        T44.iter()
            .flat_map(|&((l3, l4), rows)| block(rows, &[l3, l4]))
            .collect(),
    ));
    out.push(table("T_{3,6}", "T", &[3, 6], stacked(&T36)));
    out.extend([t3(2), t3(3)]);
    out.extend([t_odd_corner(1, 2), t_odd_corner(2, 2), t_odd_corner(2, 3)]);
    out
}

/// Mismatches between a table and the computed grid, as readable strings.
pub fn check(t: &Table) -> Vec<String> {
    let (entry, g) = get(t.germ.0, &t.germ.1).expect("catalog germ");
    let r = g.r();
    let mut bound = g.conductor().clone();
    for c in &t.cells {
        assert_eq!(c.point.dim(), r, "{}: cell dimension", t.label);
        bound = bound.join(&c.point);
    }
    let w = g.weights(&bound).expect("weights");
    let s = g.semigroup(&bound).expect("semigroup");
    let mut bad = Vec::new();
    for c in &t.cells {
        let got = w.get(&c.point).expect("in grid");
        if got != c.weight {
            bad.push(format!("{} w{} = {got}, table {}", entry.name, c.point, c.weight));
        }
        if let Some(b) = c.in_semigroup {
            if s.contains(&c.point) != b {
                bad.push(format!("{} {} semigroup membership {}", entry.name, c.point, !b));
            }
        }
        if c.conductor && &c.point != g.conductor() {
            bad.push(format!("{} conductor is {}, table boxes {}", entry.name, g.conductor(), c.point));
        }
    }
    bad
}
