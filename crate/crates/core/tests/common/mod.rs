#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::Ratio;
use rba6::realize::SignChoice;
use rba6::sieve::{canonicalize, exact_tensor};
use rba6::spectrum::ParameterSet;
use rba6::surd::{Rational, Surd};
use rba6::tensor::StructureTensor;

#[derive(Clone, Debug)]
pub struct CensusRow {
    pub n: i64,
    pub params: ParameterSet,
    pub m_phi: Rational,
    pub m_chi: Rational,
    pub comment: String,
}

impl CensusRow {
    pub fn primitive(&self) -> bool {
        self.comment.contains("primitive")
    }

    pub fn not_ta(&self) -> bool {
        self.comment.contains("Not TA")
    }

    pub fn is_wreath(&self) -> bool {
        self.comment.contains('∘')
    }
}

/// Reference census transcribed row by row from the printed table.
pub fn reference_census() -> Vec<CensusRow> {
    include_str!("../data/reference_census")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('|').map(str::trim).collect();
            let (mp, mc) = f[2].split_once(',').unwrap();
            CensusRow {
                n: f[0].parse().unwrap(),
                params: f[1].parse().unwrap(),
                m_phi: mp.parse().unwrap(),
                m_chi: mc.parse().unwrap(),
                comment: f[3].to_string(),
            }
        })
        .collect()
}

pub type Perm = [usize; 3];

fn compose(a: &Perm, b: &Perm) -> Perm {
    // (a∘b)(x) = a(b(x))
    std::array::from_fn(|x| a[b[x]])
}

/// Structure constants of ℂS₃ in a basis matched to b₀..b₅ (identity,
/// three transpositions, two 3-cycles with g₅ = g₄⁻¹).
pub fn s3_group_tensors() -> Vec<Vec<i64>> {
    let id = [0, 1, 2];
    let transp = [[1, 0, 2], [0, 2, 1], [2, 1, 0]];
    let c = [1, 2, 0];
    let c_inv = compose(&c, &c);
    let mut out = Vec::new();
    let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for o in orders {
        for swap in [false, true] {
            let (g4, g5) = if swap { (c_inv, c) } else { (c, c_inv) };
            let g = [id, transp[o[0]], transp[o[1]], transp[o[2]], g4, g5];
            let mut lambda = vec![0i64; 216];
            for i in 0..6 {
                for j in 0..6 {
                    let prod = compose(&g[i], &g[j]);
                    let k = g.iter().position(|x| *x == prod).unwrap();
                    lambda[(i * 6 + j) * 6 + k] = 1;
                }
            }
            out.push(lambda);
        }
    }
    out
}

pub fn tensor_as_ints(t: &StructureTensor) -> Option<Vec<i64>> {
    t.lambda.iter().map(Surd::as_i64).collect()
}

/// Unpruned search: every integer (δ, φ) with n ≤ bound and |φᵢ| ≤ δᵢ,
/// checked with the exact tensor, deduplicated by canonical form.
pub fn brute_force(max_order: i64) -> BTreeSet<ParameterSet> {
    let mut out = BTreeSet::new();
    for d4 in 1..=max_order {
        for d1 in 1..=max_order {
            for d2 in 1..=max_order {
                for d3 in 1..=max_order {
                    if 1 + d1 + d2 + d3 + 2 * d4 > max_order {
                        continue;
                    }
                    for p1 in -d1..=d1 {
                        for p2 in -d2..=d2 {
                            for p3 in -d3..=d3 {
                                for p4 in -d4..=d4 {
                                    if 1 + p1 + p2 + p3 + 2 * p4 != 0 {
                                        continue;
                                    }
                                    let (d, f) = ([d1, d2, d3, d4], [p1, p2, p3, p4]);
                                    if !chi_integral(d, f) {
                                        continue;
                                    }
                                    let p = ParameterSet::from_ints(d, f);
                                    if p.validate().is_err() {
                                        continue;
                                    }
                                    let c = canonicalize(&p);
                                    if out.contains(&c) {
                                        continue;
                                    }
                                    if let Some(t) = exact_tensor(&p) {
                                        if t.is_integral {
                                            out.insert(c);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// χᵢ ∈ ℤ straight from the character-table formulas in machine
/// rationals. Integral λ forces it (the eigenvalues of the regular
/// representation are algebraic integers).
fn chi_integral(d: [i64; 4], f: [i64; 4]) -> bool {
    type Q = Ratio<i128>;
    let n = Q::from(1 + d.iter().sum::<i64>() as i128 + d[3] as i128);
    let mut s = Q::from(1);
    for i in 0..4 {
        let w = if i == 3 { 2 } else { 1 };
        s += Q::new((w * f[i] * f[i]) as i128, d[i] as i128);
    }
    let m_phi = n / s;
    let m_chi = (n - Q::from(1) - m_phi) / Q::from(2);
    if m_chi <= Q::from(0) {
        return false;
    }
    (0..4).all(|i| (-(Q::from(d[i] as i128) + m_phi * Q::from(f[i] as i128)) / m_chi).is_integer())
}

pub fn signs() -> Vec<SignChoice> {
    SignChoice::all().collect()
}
pub mod closed_forms;
