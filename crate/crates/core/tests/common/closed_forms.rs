//! Hand-transcribed product formulas for the two bipartite m_φ = 1
//! families. Each coefficient is a + σ·c·√(δ₁δ₂δ₃) with σ = ±1 fixed
//! per basis.

use rba6::spectrum::ParameterSet;
use rba6::surd::{Rational, Surd};
use rba6::tensor::StructureTensor;

pub struct Term {
    pub k: usize,
    pub a: Rational,
    pub c: Rational,
}

pub struct Product {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<Term>,
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

fn t(k: usize, a: Rational) -> Term {
    Term { k, a, c: Rational::zero() }
}

fn ts(k: usize, a: Rational, c: Rational) -> Term {
    Term { k, a, c }
}

fn p(i: usize, j: usize, terms: Vec<Term>) -> Product {
    Product { i, j, terms }
}

/// Kernel {b₀, b₂, b₃}: φ = (−δ₁, δ₂, δ₃, −δ₄), 1 + δ₂ + δ₃ = δ₁ + 2δ₄.
pub fn real_family(d1: i64, d2: i64, d3: i64) -> Option<ParameterSet> {
    let twice = 1 + d2 + d3 - d1;
    if d1 < 1 || twice <= 0 || twice % 2 != 0 {
        return None;
    }
    let d4 = twice / 2;
    Some(ParameterSet::from_ints([d1, d2, d3, d4], [-d1, d2, d3, -d4]))
}

/// Kernel {b₀, b₄, b₅}: φ = (−δ₁, −δ₂, −δ₃, δ₄), δ₁ + δ₂ + δ₃ = 1 + 2δ₄.
pub fn nonreal_family(d1: i64, d2: i64, d3: i64) -> Option<ParameterSet> {
    let s = d1 + d2 + d3 - 1;
    if s <= 0 || s % 2 != 0 {
        return None;
    }
    let d4 = s / 2;
    Some(ParameterSet::from_ints([d1, d2, d3, d4], [-d1, -d2, -d3, d4]))
}

fn degrees(p: &ParameterSet) -> (Rational, Rational, Rational, Rational, Rational) {
    let d = &p.delta;
    (d[0].clone(), d[1].clone(), d[2].clone(), d[3].clone(), p.order())
}

pub fn real_products(params: &ParameterSet) -> Vec<Product> {
    let (d1, d2, d3, d4, n) = degrees(params);
    let s = &d2 + &d3;
    let s2 = &s * &s;
    let one = q(1);
    let two = q(2);
    let three = q(3);
    let b22 = &d2 * (&d2 * &d2 - &d2 + &d2 * &d3 - &three * &d3) / &s2;
    let b23 = &d2 * (&d2 * &n - &two * &d3) / (&two * &s2);
    let b32 = &d3 * (&d3 * &n - &two * &d2) / (&two * &s2);
    let b33 = &d3 * (&d3 * &d3 - &d3 + &d2 * &d3 - &three * &d2) / &s2;
    let x14_2 = (&d4 * &d1 * &d2 / (&d2 * &s), &d4 / (&d2 * &s));
    let x14_3 = (&d4 * &d1 * &d3 / (&d3 * &s), &d4 / (&d3 * &s));
    let x45_2 = (&d4 * (&d2 * &d4 - &d2) / (&d2 * &s), &d4 / (&d2 * &s));
    let x45_3 = (&d4 * (&d3 * &d4 - &d3) / (&d3 * &s), &d4 / (&d3 * &s));
    let b11 = (&d1 * &d1 - &d1) / &s;
    let r_s = &one / &s;
    let x24_1 = (&d4 * &d1 * &d2 / (&d1 * &s), &d4 / (&d1 * &s));
    let x34_1 = (&d4 * &d1 * &d3 / (&d1 * &s), &d4 / (&d1 * &s));
    let y2 = (&d2 * &d4 - &d2) / &s;
    let y3 = (&d3 * &d4 - &d3) / &s;
    let z2 = &d2 * &d4 / &s;
    let z3 = &d3 * &d4 / &s;
    let b44 = &d4 * &d4 / &s;
    let neg = |x: &Rational| -x.clone();
    vec![
        p(2, 2, vec![t(0, d2.clone()), t(2, b22.clone()), t(3, b23.clone())]),
        p(3, 3, vec![t(0, d3.clone()), t(2, b32.clone()), t(3, b33.clone())]),
        p(1, 4, vec![ts(2, x14_2.0.clone(), x14_2.1.clone()), ts(3, x14_3.0.clone(), neg(&x14_3.1))]),
        p(1, 5, vec![ts(2, x14_2.0.clone(), neg(&x14_2.1)), ts(3, x14_3.0.clone(), x14_3.1.clone())]),
        p(
            4,
            5,
            vec![t(0, d4.clone()), ts(2, x45_2.0.clone(), x45_2.1.clone()), ts(3, x45_3.0.clone(), neg(&x45_3.1))],
        ),
        p(1, 1, vec![t(0, d1.clone()), t(2, b11.clone()), t(3, b11.clone())]),
        p(
            1,
            2,
            vec![
                t(1, &d2 * (&d1 - &one) / &s),
                ts(4, &d1 * &d2 / &s, r_s.clone()),
                ts(5, &d1 * &d2 / &s, neg(&r_s)),
            ],
        ),
        p(
            1,
            3,
            vec![
                t(1, &d3 * (&d1 - &one) / &s),
                ts(4, &d1 * &d3 / &s, neg(&r_s)),
                ts(5, &d1 * &d3 / &s, r_s.clone()),
            ],
        ),
        p(2, 3, vec![t(2, &d3 * (&d2 * &n - &two * &d3) / (&two * &s2)), t(3, &d2 * (&d3 * &n - &two * &d2) / (&two * &s2))]),
        p(3, 2, vec![t(2, &d3 * (&d2 * &n - &two * &d3) / (&two * &s2)), t(3, &d2 * (&d3 * &n - &two * &d2) / (&two * &s2))]),
        p(2, 4, vec![ts(1, x24_1.0.clone(), neg(&x24_1.1)), ts(4, y2.clone(), r_s.clone()), t(5, z2.clone())]),
        p(2, 5, vec![ts(1, x24_1.0.clone(), x24_1.1.clone()), t(4, z2.clone()), ts(5, y2.clone(), neg(&r_s))]),
        p(3, 4, vec![ts(1, x34_1.0.clone(), x34_1.1.clone()), ts(4, y3.clone(), neg(&r_s)), t(5, z3.clone())]),
        p(3, 5, vec![ts(1, x34_1.0.clone(), neg(&x34_1.1)), t(4, z3.clone()), ts(5, y3.clone(), r_s.clone())]),
        p(
            5,
            4,
            vec![t(0, d4.clone()), ts(2, x45_2.0.clone(), neg(&x45_2.1)), ts(3, x45_3.0.clone(), x45_3.1.clone())],
        ),
        p(4, 4, vec![t(2, b44.clone()), t(3, b44.clone())]),
        p(5, 5, vec![t(2, b44.clone()), t(3, b44)]),
    ]
}

pub fn nonreal_products(params: &ParameterSet) -> Vec<Product> {
    let (d1, d2, d3, d4, _) = degrees(params);
    let e = &q(2) * &d4;
    let one = q(1);
    let two = q(2);
    let half = |x: Rational| x / q(2);
    let sq = |d: &Rational| (d * d - d) / &e;
    let r_e = &one / &e;
    let neg = |x: &Rational| -x.clone();
    let h = |d: &Rational| &one / (&two * d);
    vec![
        p(1, 1, vec![t(0, d1.clone()), t(4, sq(&d1)), t(5, sq(&d1))]),
        p(2, 2, vec![t(0, d2.clone()), t(4, sq(&d2)), t(5, sq(&d2))]),
        p(3, 3, vec![t(0, d3.clone()), t(4, sq(&d3)), t(5, sq(&d3))]),
        p(1, 2, vec![ts(4, &d1 * &d2 / &e, r_e.clone()), ts(5, &d1 * &d2 / &e, neg(&r_e))]),
        p(1, 3, vec![ts(4, &d1 * &d3 / &e, neg(&r_e)), ts(5, &d1 * &d3 / &e, r_e.clone())]),
        p(2, 3, vec![ts(4, &d2 * &d3 / &e, r_e.clone()), ts(5, &d2 * &d3 / &e, neg(&r_e))]),
        p(4, 5, vec![t(0, d4.clone()), t(4, half(&d4 - &one)), t(5, half(&d4 - &one))]),
        p(4, 4, vec![t(4, half(&d4 - &one)), t(5, half(&d4 + &one))]),
        p(
            1,
            4,
            vec![t(1, half(&d1 - &one)), ts(2, half(d1.clone()), h(&d2)), ts(3, half(d1.clone()), neg(&h(&d3)))],
        ),
        p(
            1,
            5,
            vec![t(1, half(&d1 - &one)), ts(2, half(d1.clone()), neg(&h(&d2))), ts(3, half(d1.clone()), h(&d3))],
        ),
        p(
            2,
            4,
            vec![ts(1, half(d2.clone()), neg(&h(&d1))), t(2, half(&d2 - &one)), ts(3, half(d2.clone()), h(&d3))],
        ),
        p(
            2,
            5,
            vec![ts(1, half(d2.clone()), h(&d1)), t(2, half(&d2 - &one)), ts(3, half(d2.clone()), neg(&h(&d3)))],
        ),
        p(
            3,
            4,
            vec![ts(1, half(d3.clone()), h(&d1)), ts(2, half(d3.clone()), neg(&h(&d2))), t(3, half(&d3 - &one))],
        ),
        p(
            3,
            5,
            vec![ts(1, half(d3.clone()), neg(&h(&d1))), ts(2, half(d3.clone()), h(&d2)), t(3, half(&d3 - &one))],
        ),
    ]
}

/// Checks every listed product against the tensor for one σ; products
/// not listed are left alone, unlisted k in a listed product must be 0.
pub fn matches_with_sigma(t: &StructureTensor, params: &ParameterSet, products: &[Product], sigma: i64) -> Result<(), String> {
    let root = Surd::sqrt(&(&params.delta[0] * &params.delta[1] * &params.delta[2])).unwrap();
    for pr in products {
        for k in 0..6 {
            let want = match pr.terms.iter().find(|x| x.k == k) {
                Some(x) => Surd::from(x.a.clone()) + root.scale(&(&x.c * &Rational::from(sigma))),
                None => Surd::zero(),
            };
            let got = t.get(pr.i, pr.j, k);
            if *got != want {
                return Err(format!("b{} b{} coefficient of b{}: tensor {got}, formula {want}", pr.i, pr.j, k));
            }
        }
    }
    Ok(())
}

/// The σ for which every formula holds, if any.
pub fn matching_sigma(t: &StructureTensor, params: &ParameterSet, products: &[Product]) -> Result<i64, String> {
    let plus = matches_with_sigma(t, params, products, 1);
    if plus.is_ok() {
        return Ok(1);
    }
    matches_with_sigma(t, params, products, -1).map(|_| -1).map_err(|e| format!("σ=+1: {}; σ=−1: {e}", plus.unwrap_err()))
}
