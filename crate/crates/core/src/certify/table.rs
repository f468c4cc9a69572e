//! The fourteen Sp₄ pairs with `f = (X - 1)⁴`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclo::{
    coprime, exponent_support_gcd, format_params, is_individually_primitive, HGParams,
    IntPolynomial,
};
use crate::exact::parse_rational_list;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArithmeticStatus {
    /// Arithmetic, certified by an explicit word program.
    #[serde(rename = "Yes")]
    Arithmetic,
    /// Arithmetic by the translation-vector criterion.
    #[serde(rename = "Yes [SV]")]
    ArithmeticSv,
    /// Thin.
    #[serde(rename = "No [BT]")]
    Thin,
}

impl fmt::Display for ArithmeticStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArithmeticStatus::Arithmetic => "Yes",
            ArithmeticStatus::ArithmeticSv => "Yes [SV]",
            ArithmeticStatus::Thin => "No [BT]",
        })
    }
}

/// One fixture row: `beta` parameters, `g` coefficients (constant first)
/// and the `f - g` column (constant first).
#[derive(Debug, Clone)]
pub struct TableEntry {
    pub row: usize,
    pub beta: &'static str,
    pub g: [i64; 5],
    pub f_minus_g: [i64; 4],
    pub status: ArithmeticStatus,
    /// Case number of the builtin certificate covering this row.
    pub certificate_case: Option<u32>,
}

use ArithmeticStatus::{Arithmetic, ArithmeticSv, Thin};

pub const TABLE: [TableEntry; 14] = [
    entry(
        1,
        "1/6,1/6,5/6,5/6",
        [1, -2, 3, -2, 1],
        [0, -2, 3, -2],
        ArithmeticSv,
        None,
    ),
    entry(
        2,
        "1/2,1/2,1/2,1/2",
        [1, 4, 6, 4, 1],
        [0, -8, 0, -8],
        Thin,
        None,
    ),
    entry(
        3,
        "1/3,1/3,2/3,2/3",
        [1, 2, 3, 2, 1],
        [0, -6, 3, -6],
        Arithmetic,
        Some(4),
    ),
    entry(
        4,
        "1/2,1/2,1/3,2/3",
        [1, 3, 4, 3, 1],
        [0, -7, 2, -7],
        Thin,
        None,
    ),
    entry(
        5,
        "1/4,1/4,3/4,3/4",
        [1, 0, 2, 0, 1],
        [0, -4, 4, -4],
        Arithmetic,
        Some(10),
    ),
    entry(
        6,
        "1/2,1/2,1/4,3/4",
        [1, 2, 2, 2, 1],
        [0, -6, 4, -6],
        Thin,
        None,
    ),
    entry(
        7,
        "1/3,2/3,1/4,3/4",
        [1, 1, 2, 1, 1],
        [0, -5, 4, -5],
        Arithmetic,
        Some(11),
    ),
    entry(
        8,
        "1/5,2/5,3/5,4/5",
        [1, 1, 1, 1, 1],
        [0, -5, 5, -5],
        Thin,
        None,
    ),
    entry(
        9,
        "1/2,1/2,1/6,5/6",
        [1, 1, 0, 1, 1],
        [0, -5, 6, -5],
        Thin,
        None,
    ),
    entry(
        10,
        "1/3,2/3,1/6,5/6",
        [1, 0, 1, 0, 1],
        [0, -4, 5, -4],
        Arithmetic,
        Some(8),
    ),
    entry(
        11,
        "1/4,3/4,1/6,5/6",
        [1, -1, 2, -1, 1],
        [0, -3, 4, -3],
        ArithmeticSv,
        None,
    ),
    entry(
        12,
        "1/8,3/8,5/8,7/8",
        [1, 0, 0, 0, 1],
        [0, -4, 6, -4],
        Thin,
        None,
    ),
    entry(
        13,
        "1/10,3/10,7/10,9/10",
        [1, -1, 1, -1, 1],
        [0, -3, 5, -3],
        ArithmeticSv,
        None,
    ),
    entry(
        14,
        "1/12,5/12,7/12,11/12",
        [1, 0, -1, 0, 1],
        [0, -4, 7, -4],
        Thin,
        None,
    ),
];

const fn entry(
    row: usize,
    beta: &'static str,
    g: [i64; 5],
    f_minus_g: [i64; 4],
    status: ArithmeticStatus,
    certificate_case: Option<u32>,
) -> TableEntry {
    TableEntry {
        row,
        beta,
        g,
        f_minus_g,
        status,
        certificate_case,
    }
}

impl TableEntry {
    pub fn params(&self) -> HGParams {
        let alpha = parse_rational_list("0,0,0,0").expect("fixture");
        let beta = parse_rational_list(self.beta).expect("fixture");
        HGParams::new(alpha, beta).expect("fixture parameters are valid")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRowReport {
    pub row: usize,
    pub beta: String,
    pub g: IntPolynomial,
    pub g_matches: bool,
    pub f_minus_g: IntPolynomial,
    pub f_minus_g_matches: bool,
    pub coprime: bool,
    pub f_primitive: bool,
    pub g_primitive: bool,
    /// gcd of the exponents occurring in `f` and `g` together; 1 means the
    /// pair is not a polynomial in `X^k` for any `k > 1`.
    pub pair_support_gcd: u64,
    pub status: ArithmeticStatus,
    pub certificate_case: Option<u32>,
}

impl TableRowReport {
    pub fn passed(&self) -> bool {
        self.g_matches && self.f_minus_g_matches && self.coprime
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub rows: Vec<TableRowReport>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(TableRowReport::passed)
    }
}

pub fn verify_table() -> TableReport {
    let rows = TABLE
        .iter()
        .map(|e| {
            let params = e.params();
            let (f, g) = (params.f(), params.g());
            let f_minus_g = &f - &g;
            TableRowReport {
                row: e.row,
                beta: format_params(params.beta()),
                g_matches: g == IntPolynomial::from_i64(&e.g),
                f_minus_g_matches: f_minus_g == IntPolynomial::from_i64(&e.f_minus_g),
                coprime: coprime(&f, &g),
                f_primitive: is_individually_primitive(&f),
                g_primitive: is_individually_primitive(&g),
                pair_support_gcd: exponent_support_gcd([&f, &g]),
                status: e.status,
                certificate_case: e.certificate_case,
                g,
                f_minus_g,
            }
        })
        .collect();
    TableReport { rows }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>3}  {:<22} {:<26} {:<5} {:<5} {:<5} {:<5} {:>3}  status",
            "row", "beta", "f - g", "match", "copr", "primf", "primg", "gcd"
        )?;
        for r in &self.rows {
            let yn = |b: bool| if b { "yes" } else { "NO" };
            let status = match r.certificate_case {
                Some(case) => format!("{} (certificate: case {case})", r.status),
                None => r.status.to_string(),
            };
            writeln!(
                f,
                "{:>3}  {:<22} {:<26} {:<5} {:<5} {:<5} {:<5} {:>3}  {}",
                r.row,
                r.beta,
                r.f_minus_g.to_string(),
                yn(r.g_matches && r.f_minus_g_matches),
                yn(r.coprime),
                yn(r.f_primitive),
                yn(r.g_primitive),
                r.pair_support_gcd,
                status
            )?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "all rows reproduced"
            } else {
                "MISMATCH in at least one row"
            }
        )
    }
}
