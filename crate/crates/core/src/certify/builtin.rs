//! The four arithmetic certificates with every displayed matrix as an
//! expected value.

use indexmap::IndexMap;

use super::{Certificate, Lambdas, ProgramStep};
use crate::exact::{frac, rat, ExactMatrix, Rational};
use crate::symplectic::Sign;

type Rows = [[i64; 4]; 4];

fn m(rows: &Rows) -> ExactMatrix {
    ExactMatrix::from_i64_rows(rows)
}

fn fractions(text: &str) -> Vec<Rational> {
    crate::exact::parse_rational_list(text).expect("fixture fractions")
}

/// Antisymmetric Toeplitz matrix with first row `(0, a, b, c)`. Every
/// form invariant under a 4×4 companion matrix has this shape.
fn toeplitz_form(a: Rational, b: Rational, c: Rational) -> ExactMatrix {
    let z = rat(0);
    ExactMatrix::from_rows(vec![
        vec![z.clone(), a.clone(), b.clone(), c.clone()],
        vec![-a.clone(), z.clone(), a.clone(), b.clone()],
        vec![-b.clone(), -a.clone(), z.clone(), a.clone()],
        vec![-c, -b, -a, z],
    ])
    .expect("4x4")
}

fn companion_rows(g: [i64; 4]) -> Rows {
    [
        [0, 0, 0, -g[0]],
        [1, 0, 0, -g[1]],
        [0, 1, 0, -g[2]],
        [0, 0, 1, -g[3]],
    ]
}

fn transvection_rows(last: [i64; 4]) -> Rows {
    [
        [1, 0, 0, last[0]],
        [0, 1, 0, last[1]],
        [0, 0, 1, last[2]],
        [0, 0, 0, last[3]],
    ]
}

const A_ROWS: Rows = [[0, 0, 0, -1], [1, 0, 0, 4], [0, 1, 0, -6], [0, 0, 1, 4]];

struct Fixture {
    label: &'static str,
    beta: &'static str,
    g_low: [i64; 4],
    c_last: [i64; 4],
    form_row: (Rational, Rational, Rational),
    basis: [[i64; 4]; 4],
    lambdas: (Rational, Rational),
    sign: Sign,
    program: &'static [(&'static str, &'static str)],
    witnesses: [&'static str; 4],
    expected: Vec<(&'static str, Rows)>,
}

impl Fixture {
    fn build(self) -> Certificate {
        let mut expected_standard = IndexMap::new();
        expected_standard.insert("A".to_owned(), m(&A_ROWS));
        expected_standard.insert("B".to_owned(), m(&companion_rows(self.g_low)));
        expected_standard.insert("C".to_owned(), m(&transvection_rows(self.c_last)));
        let (a, b, c) = self.form_row;
        Certificate {
            label: Some(self.label.to_owned()),
            alpha: fractions("0,0,0,0"),
            beta: fractions(self.beta),
            basis: Some(m(&self.basis)),
            sign: self.sign,
            program: self
                .program
                .iter()
                .map(|(name, word)| ProgramStep {
                    name: (*name).to_owned(),
                    word: (*word).to_owned(),
                })
                .collect(),
            witnesses: self.witnesses.iter().map(|s| (*s).to_owned()).collect(),
            expected: self
                .expected
                .iter()
                .map(|(name, rows)| ((*name).to_owned(), m(rows)))
                .collect(),
            expected_standard,
            expected_form: Some(toeplitz_form(a, b, c)),
            expected_lambdas: Some(Lambdas {
                lambda1: self.lambdas.0,
                lambda2: self.lambdas.1,
            }),
        }
    }
}

const I4: Rows = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

fn with_entries(entries: &[(usize, usize, i64)]) -> Rows {
    let mut r = I4;
    for &(i, j, v) in entries {
        r[i - 1][j - 1] = v;
    }
    r
}

fn case_11() -> Certificate {
    Fixture {
        label: "case 11",
        beta: "1/3,2/3,1/4,3/4",
        g_low: [1, 1, 2, 1],
        c_last: [-5, 4, -5, 1],
        form_row: (rat(1), frac(4, 5), frac(-9, 5)),
        basis: [[1, 0, 1, 0], [-5, 4, -5, 0], [-9, 4, -5, 4], [1, 1, 0, 0]],
        lambdas: (frac(-4, 5), frac(144, 5)),
        sign: Sign::Positive,
        program: &[
            ("P", "C"),
            ("Q", "B^-3*C*B^3"),
            ("R", "B^3*C*B^-3"),
            ("E", "Q^-1*R"),
            ("F", "Q^-1*R*Q*P^-1"),
            ("G", "[E,F]"),
            ("x", "[G,E]"),
            ("y", "x^-36*E^1152"),
            ("u", "G^82944*y^1152"),
            ("z", "u^-1152*x^63403237638144"),
        ],
        witnesses: ["P", "x", "y", "z"],
        expected: vec![
            ("P", with_entries(&[(2, 3, 4)])),
            ("Q", with_entries(&[(3, 2, -4)])),
            (
                "R",
                [[1, -72, 0, -36], [0, 1, 0, 0], [0, -4, 1, -2], [0, 0, 0, 1]],
            ),
            (
                "E",
                [[1, -72, 0, -36], [0, 1, 0, 0], [0, 0, 1, -2], [0, 0, 0, 1]],
            ),
            (
                "F",
                [
                    [1, -72, 288, -36],
                    [0, 1, -4, 0],
                    [0, -4, 17, -2],
                    [0, 0, 0, 1],
                ],
            ),
            (
                "G",
                [
                    [1, 1152, 288, 1728],
                    [0, 1, 0, -8],
                    [0, 0, 1, 32],
                    [0, 0, 0, 1],
                ],
            ),
            ("x", with_entries(&[(1, 4, -1152)])),
            ("y", with_entries(&[(1, 2, -82944), (3, 4, -2304)])),
            (
                "u",
                [
                    [1, 0, 23887872, -63403237638144],
                    [0, 1, 0, -663552],
                    [0, 0, 1, 0],
                    [0, 0, 0, 1],
                ],
            ),
            (
                "z",
                with_entries(&[(1, 3, -27518828544), (2, 4, 764411904)]),
            ),
        ],
    }
    .build()
}

fn case_4() -> Certificate {
    Fixture {
        label: "case 4",
        beta: "1/3,1/3,2/3,2/3",
        g_low: [1, 2, 3, 2],
        c_last: [-6, 3, -6, 1],
        form_row: (rat(1), frac(1, 2), rat(-3)),
        basis: [[1, 0, 1, 0], [-6, 3, -6, 0], [24, 12, 12, -3], [1, 2, 0, 0]],
        lambdas: (frac(-1, 2), frac(-81, 2)),
        sign: Sign::Negative,
        program: &[
            ("P", "C"),
            ("Q", "B^-4*C*B^4"),
            ("R", "A^-1*C*A"),
            ("G", "Q^-4*R"),
            ("H", "P*G*P^-1"),
            ("x", "[G,H]"),
            ("y", "x^27*G^1944"),
            ("E", "H^1944*x^27"),
            ("F", "E^-1*y"),
            ("z", "F^-1944*x^3673320192"),
        ],
        witnesses: ["Q", "x", "y", "z"],
        expected: vec![
            ("P", with_entries(&[(2, 3, -3)])),
            ("Q", with_entries(&[(3, 2, 3)])),
            (
                "R",
                with_entries(&[(3, 1, -2), (3, 2, 12), (4, 1, 27), (4, 2, -162)]),
            ),
            ("G", with_entries(&[(3, 1, -2), (4, 1, 27), (4, 2, -162)])),
            (
                "H",
                with_entries(&[
                    (2, 1, 6),
                    (3, 1, -2),
                    (4, 1, 27),
                    (4, 2, -162),
                    (4, 3, -486),
                ]),
            ),
            ("x", with_entries(&[(4, 1, -1944)])),
            ("y", with_entries(&[(3, 1, -3888), (4, 2, -314928)])),
            (
                "E",
                with_entries(&[
                    (2, 1, 11664),
                    (3, 1, -3888),
                    (4, 2, -314928),
                    (4, 3, -944784),
                ]),
            ),
            (
                "F",
                with_entries(&[(2, 1, -11664), (4, 1, -3673320192), (4, 3, 944784)]),
            ),
            ("z", with_entries(&[(2, 1, 22674816), (4, 3, -1836660096)])),
        ],
    }
    .build()
}

fn case_8() -> Certificate {
    Fixture {
        label: "case 8",
        beta: "1/3,2/3,1/6,5/6",
        g_low: [1, 0, 1, 0],
        c_last: [-4, 5, -4, 1],
        form_row: (rat(1), frac(5, 4), rat(0)),
        basis: [[0, 1, 0, 0], [-4, 5, -4, 0], [5, 0, 0, 4], [1, 0, 0, 0]],
        lambdas: (rat(-1), rat(9)),
        sign: Sign::Positive,
        program: &[
            ("P", "C"),
            ("Q", "B^-1*C*B"),
            // The fourth power of C makes R and everything after it agree
            // with the displayed matrices; with C itself R - I is 1/4 of them.
            ("R", "B^3*C^4*B^-3"),
            ("S", "P^25*R^-4"),
            ("G", "Q*S*Q^-1"),
            ("x", "[S,G]"),
            ("y", "S^28800*x^-36"),
            ("H", "G^5184000*y^-180"),
            ("z", "H^28800*x^-386983526586624000"),
        ],
        witnesses: ["P", "x", "y", "z"],
        expected: vec![
            ("P", with_entries(&[(2, 3, 4)])),
            ("Q", with_entries(&[(3, 2, -4)])),
            (
                "R",
                [[1, 0, -45, -9], [0, 1, 25, 5], [0, 0, 1, 0], [0, 0, 0, 1]],
            ),
            ("S", with_entries(&[(1, 3, 180), (1, 4, 36), (2, 4, -20)])),
            (
                "G",
                with_entries(&[
                    (1, 2, 720),
                    (1, 3, 180),
                    (1, 4, 36),
                    (2, 4, -20),
                    (3, 4, 80),
                ]),
            ),
            ("x", with_entries(&[(1, 4, 28800)])),
            ("y", with_entries(&[(1, 3, 5184000), (2, 4, -576000)])),
            (
                "H",
                with_entries(&[
                    (1, 2, 3732480000),
                    (1, 4, 386983526586624000),
                    (3, 4, 414720000),
                ]),
            ),
            (
                "z",
                with_entries(&[(1, 2, 107495424000000), (3, 4, 11943936000000)]),
            ),
        ],
    }
    .build()
}

fn case_10() -> Certificate {
    Fixture {
        label: "case 10",
        beta: "1/4,1/4,3/4,3/4",
        g_low: [1, 0, 2, 0],
        c_last: [-4, 4, -4, 1],
        form_row: (rat(1), rat(1), rat(-1)),
        basis: [[0, 1, 0, 0], [-1, 1, -1, 0], [3, 1, 2, 1], [3, 0, 2, 0]],
        lambdas: (rat(-1), rat(1)),
        sign: Sign::Positive,
        program: &[
            ("P", "C"),
            ("Q", "B^-5*C*B^5"),
            ("R", "B^3*C*B^-3"),
            ("S", "P^-1*R*P*Q^-1"),
            ("E", "P*S*P^-1"),
            ("x", "[S,E]"),
            ("y", "S^2048*x^64"),
            ("G", "E^2048*x^64"),
            ("H", "G^-1*y"),
            ("z", "H^-2048*x^4294967296"),
        ],
        witnesses: ["P", "x", "y", "z"],
        expected: vec![
            ("P", with_entries(&[(2, 3, 4)])),
            ("Q", with_entries(&[(3, 2, -4)])),
            (
                "R",
                [
                    [1, 16, -64, -64],
                    [0, -15, 64, 64],
                    [0, -4, 17, 16],
                    [0, 0, 0, 1],
                ],
            ),
            ("S", with_entries(&[(1, 2, 16), (1, 4, -64), (3, 4, 16)])),
            (
                "E",
                with_entries(&[(1, 2, 16), (1, 3, -64), (1, 4, -64), (2, 4, 64), (3, 4, 16)]),
            ),
            ("x", with_entries(&[(1, 4, 2048)])),
            ("y", with_entries(&[(1, 2, 32768), (3, 4, 32768)])),
            (
                "G",
                with_entries(&[
                    (1, 2, 32768),
                    (1, 3, -131072),
                    (2, 4, 131072),
                    (3, 4, 32768),
                ]),
            ),
            (
                "H",
                with_entries(&[(1, 3, 131072), (1, 4, 4294967296), (2, 4, -131072)]),
            ),
            ("z", with_entries(&[(1, 3, -268435456), (2, 4, 268435456)])),
        ],
    }
    .build()
}

/// Case numbers of the builtin certificates, in the order returned by
/// [`builtin_certificates`].
pub const BUILTIN_CASES: [u32; 4] = [4, 8, 10, 11];

pub fn builtin_certificates() -> Vec<Certificate> {
    vec![case_4(), case_8(), case_10(), case_11()]
}

pub fn builtin_certificate(case: u32) -> Option<Certificate> {
    match case {
        4 => Some(case_4()),
        8 => Some(case_8()),
        10 => Some(case_10()),
        11 => Some(case_11()),
        _ => None,
    }
}
