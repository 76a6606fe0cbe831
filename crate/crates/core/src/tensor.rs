//! Structure constants λ_ijk of a standard basis, and quotients by closed
//! subsets.

use serde::Serialize;
use thiserror::Error;

use crate::realize::{mat_mul, transpose, Mat2, StandardBasis};
use crate::spectrum::CharacterTable;
use crate::surd::{Rational, Sign, Surd};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("subset {0:?} is not closed")]
    NotClosed(Vec<usize>),
    #[error("double cosets of {0:?} do not give a well-defined quotient")]
    IllDefinedQuotient(Vec<usize>),
}

/// An algebra element in the split coordinates ℝ ⊕ ℝ ⊕ M₂(ℝ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub delta: Surd,
    pub phi: Surd,
    pub mat: Mat2,
}

impl Element {
    pub fn basis(basis: &StandardBasis, i: usize) -> Self {
        Element {
            delta: Surd::from(basis.table.delta[i].clone()),
            phi: Surd::from(basis.table.phi[i].clone()),
            mat: basis.b[i].clone(),
        }
    }

    pub fn mul(&self, other: &Element) -> Element {
        Element {
            delta: &self.delta * &other.delta,
            phi: &self.phi * &other.phi,
            mat: mat_mul(&self.mat, &other.mat),
        }
    }

    pub fn star(&self) -> Element {
        Element {
            delta: self.delta.clone(),
            phi: self.phi.clone(),
            mat: transpose(&self.mat),
        }
    }
}

fn frobenius(a: &Mat2, b: &Mat2) -> Surd {
    &a[0][0] * &b[0][0] + &a[0][1] * &b[0][1] + &a[1][0] * &b[1][0] + &a[1][1] * &b[1][1]
}

/// ⟨x, y⟩ = τ(xy*) = δ(x)δ(y) + m_φ φ(x)φ(y) + m_χ tr(X Yᵀ).
pub fn trace_form(x: &Element, y: &Element, table: &CharacterTable) -> Surd {
    &x.delta * &y.delta
        + (&x.phi * &y.phi).scale(&table.m_phi)
        + frobenius(&x.mat, &y.mat).scale(&table.m_chi)
}

/// λ_ijk for a basis of rank r, stored flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTensor {
    pub rank: usize,
    pub lambda: Vec<Surd>,
    pub degrees: Vec<Rational>,
    pub star: Vec<usize>,
    pub is_integral: bool,
    pub is_table_algebra: bool,
    pub is_standard: bool,
    /// |φᵢ| ≤ δᵢ and |χᵢ| ≤ 2δᵢ for all i; only known for the rank-6
    /// algebra itself.
    pub within_character_bounds: Option<bool>,
}

impl StructureTensor {
    fn from_entries(lambda: Vec<Surd>, degrees: Vec<Rational>, star: Vec<usize>) -> Self {
        let rank = degrees.len();
        assert_eq!(lambda.len(), rank * rank * rank);
        let is_integral = lambda.iter().all(|x| x.as_integer().is_some());
        let is_table_algebra = lambda.iter().all(|x| x.sign() != Sign::Negative);
        let is_standard =
            (0..rank).all(|i| lambda[(i * rank + star[i]) * rank] == Surd::from(degrees[i].clone()));
        StructureTensor {
            rank,
            lambda,
            degrees,
            star,
            is_integral,
            is_table_algebra,
            is_standard,
            within_character_bounds: None,
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Surd {
        &self.lambda[(i * self.rank + j) * self.rank + k]
    }

    /// Nonzero (k, λ_ijk) in bᵢbⱼ.
    pub fn product(&self, i: usize, j: usize) -> Vec<(usize, &Surd)> {
        (0..self.rank)
            .map(|k| (k, self.get(i, j, k)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    /// Coefficients of bᵢbₖbⱼ.
    fn triple(&self, i: usize, k: usize, j: usize) -> Vec<Surd> {
        (0..self.rank)
            .map(|l| (0..self.rank).map(|m| self.get(i, k, m) * self.get(m, j, l)).sum())
            .collect()
    }

    pub fn is_closed(&self, subset: &[usize]) -> bool {
        subset.contains(&0)
            && subset.iter().all(|&i| subset.contains(&self.star[i]))
            && subset.iter().all(|&i| {
                subset
                    .iter()
                    .all(|&j| self.product(i, j).iter().all(|(k, _)| subset.contains(k)))
            })
    }

    /// Double cosets NbₖN of a closed subset, each sorted, in order of
    /// their smallest element.
    pub fn double_cosets(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.rank];
        let mut out = Vec::new();
        for k in 0..self.rank {
            if seen[k] {
                continue;
            }
            let mut class = vec![false; self.rank];
            for &i in subset {
                for &j in subset {
                    for (l, v) in self.triple(i, k, j).iter().enumerate() {
                        if !v.is_zero() {
                            class[l] = true;
                        }
                    }
                }
            }
            let members: Vec<usize> = (0..self.rank).filter(|&l| class[l]).collect();
            for &l in &members {
                seen[l] = true;
            }
            out.push(members);
        }
        out
    }

    /// Order o(N) = Σ_{i∈N} δᵢ.
    pub fn order_of(&self, subset: &[usize]) -> Rational {
        subset.iter().map(|&i| self.degrees[i].clone()).sum()
    }

    /// Structure constants of the quotient 𝐁//N with b̄_D = D⁺/o(N).
    pub fn quotient(&self, subset: &[usize]) -> Result<StructureTensor, TensorError> {
        let mut n_sorted = subset.to_vec();
        n_sorted.sort_unstable();
        n_sorted.dedup();
        if !self.is_closed(&n_sorted) {
            return Err(TensorError::NotClosed(n_sorted));
        }
        let cosets = self.double_cosets(&n_sorted);
        let bad = || TensorError::IllDefinedQuotient(n_sorted.clone());
        let mut class_of = vec![usize::MAX; self.rank];
        for (c, d) in cosets.iter().enumerate() {
            for &l in d {
                if class_of[l] != usize::MAX {
                    return Err(bad());
                }
                class_of[l] = c;
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(bad());
        }
        let on = self.order_of(&n_sorted);
        let inv = on.recip();
        let r = cosets.len();
        let mut lambda = Vec::with_capacity(r * r * r);
        for d in &cosets {
            for e in &cosets {
                for f in &cosets {
                    let coef = |k: usize| -> Surd {
                        d.iter()
                            .flat_map(|&i| e.iter().map(move |&j| (i, j)))
                            .map(|(i, j)| self.get(i, j, k).clone())
                            .sum::<Surd>()
                            .scale(&inv)
                    };
                    let g = coef(f[0]);
                    if f[1..].iter().any(|&k| coef(k) != g) {
                        return Err(bad());
                    }
                    lambda.push(g);
                }
            }
        }
        let degrees = cosets.iter().map(|d| self.order_of(d) * &inv).collect();
        let star = cosets.iter().map(|d| class_of[self.star[d[0]]]).collect();
        Ok(StructureTensor::from_entries(lambda, degrees, star))
    }

    /// Exact associativity: Σₖ λ_ijk λ_klm = Σₖ λ_jlk λ_ikm for the given
    /// quadruple.
    pub fn associative_at(&self, i: usize, j: usize, l: usize, m: usize) -> bool {
        let lhs: Surd = (0..self.rank).map(|k| self.get(i, j, k) * self.get(k, l, m)).sum();
        let rhs: Surd = (0..self.rank).map(|k| self.get(j, l, k) * self.get(i, k, m)).sum();
        lhs == rhs
    }
}

fn finish(basis: &StandardBasis, lambda: Vec<Surd>) -> StructureTensor {
    let t = &basis.table;
    let mut out = StructureTensor::from_entries(lambda, t.delta.to_vec(), (0..6).map(StandardBasis::star).collect());
    let two = Rational::from(2);
    out.within_character_bounds = Some(
        (0..6).all(|i| t.phi[i].abs() <= t.delta[i] && t.chi[i].abs() <= &two * &t.delta[i]),
    );
    out
}

/// λ_ijk = ⟨bᵢbⱼ, bₖ⟩/(nδₖ) through the trace form.
pub fn lambda_tensor(basis: &StandardBasis) -> StructureTensor {
    let t = &basis.table;
    let products: Vec<Mat2> = (0..36).map(|ij| mat_mul(&basis.b[ij / 6], &basis.b[ij % 6])).collect();
    let mut lambda = Vec::with_capacity(216);
    for i in 0..6 {
        for j in 0..6 {
            let x = &products[i * 6 + j];
            for k in 0..6 {
                let rational = &t.delta[i] * &t.delta[j] * &t.delta[k]
                    + &t.m_phi * &t.phi[i] * &t.phi[j] * &t.phi[k];
                let v = Surd::from(rational) + frobenius(x, &basis.b[k]).scale(&t.m_chi);
                lambda.push(v.div_rational(&(&t.n * &t.delta[k])).expect("n δ_k > 0"));
            }
        }
    }
    finish(basis, lambda)
}

/// λ by multiplying in split coordinates and re-expanding through
/// P⁻¹ = Q/n.
pub fn lambda_tensor_by_expansion(basis: &StandardBasis) -> StructureTensor {
    let t = &basis.table;
    let p = basis.transition();
    let m = t.row_multiplicities();
    let mut lambda = Vec::with_capacity(216);
    for i in 0..6 {
        for j in 0..6 {
            let x = Element::basis(basis, i).mul(&Element::basis(basis, j));
            let v = [
                x.delta,
                x.phi,
                x.mat[0][0].clone(),
                x.mat[1][1].clone(),
                x.mat[0][1].clone(),
                x.mat[1][0].clone(),
            ];
            for k in 0..6 {
                let s: Surd = (0..6).map(|e| (&p.rows[e][k] * &v[e]).scale(&m[e])).sum();
                lambda.push(s.div_rational(&(&t.n * &t.delta[k])).expect("n δ_k > 0"));
            }
        }
    }
    finish(basis, lambda)
}

#[derive(Serialize)]
pub struct SparseEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: Surd,
}

impl StructureTensor {
    pub fn sparse(&self) -> Vec<SparseEntry> {
        let r = self.rank;
        let mut out = Vec::new();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        out.push(SparseEntry { i, j, k, value: v.clone() });
                    }
                }
            }
        }
        out
    }

    /// `b_i b_j = …` in text form.
    pub fn expansion(&self, i: usize, j: usize) -> String {
        let terms: Vec<String> = self
            .product(i, j)
            .into_iter()
            .map(|(k, v)| {
                let s = v.to_string();
                if v.len() > 1 {
                    format!("({s}) b{k}")
                } else if s == "1" {
                    format!("b{k}")
                } else {
                    format!("{s} b{k}")
                }
            })
            .collect();
        let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        format!("b{i} b{j} = {}", rhs.replace("+ -", "- "))
    }
}
