//! Constructive realization: transition matrix, standard basis, and the
//! exact checks that a matrix really is one.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectrum::{CharacterTable, ParameterSet, Rejection};
use crate::surd::{Rational, Surd};

pub type Mat2 = [[Surd; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignChoice {
    pub eps1: i8,
    pub eps2: i8,
    pub eps3: i8,
}

impl SignChoice {
    pub const CANONICAL: SignChoice = SignChoice {
        eps1: 1,
        eps2: 1,
        eps3: 1,
    };

    pub fn new(eps1: i8, eps2: i8, eps3: i8) -> Self {
        for e in [eps1, eps2, eps3] {
            assert!(e == 1 || e == -1, "sign must be ±1");
        }
        SignChoice { eps1, eps2, eps3 }
    }

    pub fn all() -> impl Iterator<Item = SignChoice> {
        (0..8).map(|k| {
            let s = |b: u8| if k & b == 0 { 1 } else { -1 };
            SignChoice::new(s(1), s(2), s(4))
        })
    }

    pub fn product(&self) -> i8 {
        self.eps1 * self.eps2 * self.eps3
    }
}

impl Default for SignChoice {
    fn default() -> Self {
        SignChoice::CANONICAL
    }
}

impl fmt::Display for SignChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |e: i8| if e > 0 { '+' } else { '-' };
        write!(f, "{},{},{}", c(self.eps1), c(self.eps2), c(self.eps3))
    }
}

impl std::str::FromStr for SignChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("expected three comma-separated signs, got '{s}'"));
        }
        let mut e = [0i8; 3];
        let mut pos = 0;
        for (k, p) in parts.iter().enumerate() {
            e[k] = match p.trim() {
                "+" | "+1" | "1" => 1,
                "-" | "-1" => -1,
                other => return Err(format!("invalid sign '{other}' at position {pos}")),
            };
            pos += p.len() + 1;
        }
        Ok(SignChoice::new(e[0], e[1], e[2]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("invalid parameters: {0}")]
    Invalid(Rejection),
    #[error("degenerate ratio configuration: {0}")]
    Degenerate(String),
    #[error("nonpositive weight at index {0}")]
    NonPositiveWeight(usize),
}

/// Weighted inner product Σ uᵢvᵢ/wᵢ.
pub fn inner_product_delta(u: &[Surd], v: &[Surd], weights: &[Rational]) -> Result<Surd, RealizeError> {
    assert_eq!(u.len(), v.len());
    assert_eq!(u.len(), weights.len());
    let mut acc = Surd::zero();
    for i in 0..u.len() {
        if !weights[i].is_positive() {
            return Err(RealizeError::NonPositiveWeight(i));
        }
        acc += (&u[i] * &v[i]).div_rational(&weights[i]).expect("positive weight");
    }
    Ok(acc)
}

fn dot_delta(u: &[Rational; 6], v: &[Rational; 6], delta: &[Rational; 6]) -> Rational {
    (0..6).map(|i| &u[i] * &v[i] / &delta[i]).sum()
}

/// The transition matrix as rational row directions with square-root
/// scale factors. Rows are P₀, P₁, P₂+P₃, P₂−P₃, P₄+P₅, P₄−P₅, with
/// columns already in the caller's index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionRecipe {
    pub params: ParameterSet,
    pub table: CharacterTable,
    pub signs: SignChoice,
    /// Symmetric index (1..3) whose ratio differs from φ₄/δ₄ and was
    /// placed last during construction.
    pub distinct_index: usize,
    /// Symmetric index (1..3) whose matrix is diagonal.
    pub diagonal_index: usize,
    /// P₂ − P₃ = sign·√(y_scale_sq)·y.
    pub y: [Rational; 6],
    pub y_scale_sq: Rational,
    /// P₄ + P₅ = sign·√(w_scale_sq)·w.
    pub w: [Rational; 6],
    pub w_scale_sq: Rational,
    /// P₄ − P₅ = sign·√(d_scale_sq)·(0,0,0,0,1,−1).
    pub d_scale_sq: Rational,
}

/// Slot permutation used during construction: position k (0-based among
/// the symmetric indices) takes old symmetric index `perm[k]`.
fn choose_permutation(params: &ParameterSet) -> Result<(usize, [usize; 3]), RealizeError> {
    let r = params.ratios();
    let j = (0..3)
        .rev()
        .find(|&i| r[i] != r[3])
        .ok_or(RealizeError::Invalid(Rejection::CommutativeDegeneration))?;
    let mut perm = [0, 1, 2];
    perm.swap(j, 2);
    Ok((j, perm))
}

/// Basis vector of the one-dimensional nullspace of a rank-3 system in
/// four unknowns, by exact Gauss-Jordan elimination.
fn nullspace_vector(mut rows: Vec<[Rational; 4]>) -> Option<[Rational; 4]> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..4 {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for k in 0..4 {
            rows[r][k] = &rows[r][k] * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..4 {
                    let t = &rows[r][k] * &f;
                    rows[i][k] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if pivots.len() != 3 {
        return None;
    }
    let free = (0..4).find(|c| !pivots.contains(c))?;
    let mut v: [Rational; 4] = Default::default();
    v[free] = Rational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -&rows[row][free];
    }
    Some(v)
}

impl TransitionRecipe {
    pub fn new(params: &ParameterSet, signs: SignChoice) -> Result<Self, RealizeError> {
        params.validate().map_err(RealizeError::Invalid)?;
        let (distinct, perm) = choose_permutation(params)?;
        let p = params.permute_symmetric(perm);
        let table = CharacterTable::of(&p);
        let n = &table.n;
        let c = &table.m_chi;
        let delta = &table.delta;
        let r: [Rational; 6] = std::array::from_fn(|i| &table.phi[i] / &delta[i]);
        let two = Rational::from(2);

        // P₄+P₅ = (0, 0, 2s₂, 2s₃, s₄+t₄, s₄+t₄) is orthogonal to P₀ and P₁.
        let w: [Rational; 6] = [
            Rational::zero(),
            Rational::zero(),
            &two * (&r[4] - &r[3]),
            &two * (&r[2] - &r[4]),
            &r[3] - &r[2],
            &r[3] - &r[2],
        ];
        if w.iter().all(Rational::is_zero) {
            return Err(RealizeError::Degenerate("φ₂/δ₂ = φ₃/δ₃ = φ₄/δ₄".into()));
        }

        // P₂−P₃ = (0, y₁, y₂, y₃, y₄, y₄) orthogonal to P₀, P₁ and P₄+P₅.
        let sys = vec![
            [Rational::one(), Rational::one(), Rational::one(), two.clone()],
            [r[1].clone(), r[2].clone(), r[3].clone(), &two * &r[4]],
            [
                Rational::zero(),
                (&r[4] - &r[3]) / &delta[2],
                (&r[2] - &r[4]) / &delta[3],
                (&r[3] - &r[2]) / &delta[4],
            ],
        ];
        let yv = nullspace_vector(sys)
            .ok_or_else(|| RealizeError::Degenerate("P₂−P₃ system does not have rank 3".into()))?;
        let y: [Rational; 6] = [
            Rational::zero(),
            yv[0].clone(),
            yv[1].clone(),
            yv[2].clone(),
            yv[3].clone(),
            yv[3].clone(),
        ];

        let target = &two * n / c;
        let y_scale_sq = &target / dot_delta(&y, &y, delta);
        let w_scale_sq = &target / dot_delta(&w, &w, delta);
        let d_scale_sq = n * &delta[4] / c;

        // Undo the slot permutation on columns.
        let unperm = |v: &[Rational; 6]| -> [Rational; 6] {
            let mut out = v.clone();
            for k in 0..3 {
                out[perm[k] + 1] = v[k + 1].clone();
            }
            out
        };
        let diagonal_index = perm[0] + 1;
        Ok(TransitionRecipe {
            params: params.clone(),
            table: CharacterTable::of(params),
            signs,
            distinct_index: distinct + 1,
            diagonal_index,
            y: unperm(&y),
            y_scale_sq,
            w: unperm(&w),
            w_scale_sq,
            d_scale_sq,
        })
    }

    fn d_vec() -> [Rational; 6] {
        let mut d: [Rational; 6] = Default::default();
        d[4] = Rational::one();
        d[5] = Rational::from(-1);
        d
    }

    /// Exact transition matrix.
    pub fn exact(&self) -> TransitionMatrix {
        let scale = |sq: &Rational, eps: i8| {
            Surd::sqrt(sq)
                .expect("scale factors are positive")
                .scale(&Rational::from(eps as i64))
        };
        let k3 = scale(&self.y_scale_sq, self.signs.eps3);
        let k2 = scale(&self.w_scale_sq, self.signs.eps2);
        let k1 = scale(&self.d_scale_sq, self.signs.eps1);
        let d = Self::d_vec();
        let half = Rational::new(1, 2);
        let t = &self.table;
        let rows: [[Surd; 6]; 6] = std::array::from_fn(|row| {
            std::array::from_fn(|j| match row {
                0 => Surd::from(t.delta[j].clone()),
                1 => Surd::from(t.phi[j].clone()),
                2 | 3 => {
                    let chi = Surd::from(t.chi[j].clone());
                    let y = k3.scale(&self.y[j]);
                    let v = if row == 2 { chi + y } else { chi - y };
                    v.scale(&half)
                }
                _ => {
                    let w = k2.scale(&self.w[j]);
                    let dd = k1.scale(&d[j]);
                    let v = if row == 4 { w + dd } else { w - dd };
                    v.scale(&half)
                }
            })
        });
        TransitionMatrix {
            rows,
            signs: self.signs,
            diagonal_index: self.diagonal_index,
        }
    }

    /// Floating-point basis matrices B₀..B₅, for fast screening only.
    pub fn approx_basis(&self) -> [[[f64; 2]; 2]; 6] {
        let k3 = self.signs.eps3 as f64 * self.y_scale_sq.to_f64().sqrt();
        let k2 = self.signs.eps2 as f64 * self.w_scale_sq.to_f64().sqrt();
        let k1 = self.signs.eps1 as f64 * self.d_scale_sq.to_f64().sqrt();
        let d = [0.0, 0.0, 0.0, 0.0, 1.0, -1.0];
        std::array::from_fn(|j| {
            let chi = self.table.chi[j].to_f64();
            let y = k3 * self.y[j].to_f64();
            let w = k2 * self.w[j].to_f64();
            let dd = k1 * d[j];
            [[(chi + y) / 2.0, (w + dd) / 2.0], [(w - dd) / 2.0, (chi - y) / 2.0]]
        })
    }
}

/// Rows e₀..e₅, columns b₀..b₅.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub rows: [[Surd; 6]; 6],
    pub signs: SignChoice,
    pub diagonal_index: usize,
}

pub fn build_transition(params: &ParameterSet, signs: SignChoice) -> Result<TransitionMatrix, RealizeError> {
    Ok(TransitionRecipe::new(params, signs)?.exact())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)
    }
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j]))
}

pub fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0].clone(), a[1][0].clone()], [a[0][1].clone(), a[1][1].clone()]]
}

pub fn trace(a: &Mat2) -> Surd {
    &a[0][0] + &a[1][1]
}

fn mat_from_column(p: &TransitionMatrix, j: usize) -> Mat2 {
    let r = &p.rows;
    [[r[2][j].clone(), r[4][j].clone()], [r[5][j].clone(), r[3][j].clone()]]
}

/// Checks every defining property of a transition matrix exactly and
/// returns the failures (empty when all hold).
pub fn verify_transition(p: &TransitionMatrix, table: &CharacterTable) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut fail = |check: &str, detail: String| {
        out.push(Violation {
            check: check.to_string(),
            detail,
        })
    };
    let delta = &table.delta;
    let n = &table.n;
    let m = table.row_multiplicities();
    let rows = &p.rows;

    for j in 0..6 {
        if rows[0][j] != Surd::from(delta[j].clone()) {
            fail("row_structure", format!("P0[{j}] = {} ≠ δ{j}", rows[0][j]));
        }
        if rows[1][j] != Surd::from(table.phi[j].clone()) {
            fail("row_structure", format!("P1[{j}] = {} ≠ φ{j}", rows[1][j]));
        }
    }
    for j in 0..4 {
        if rows[4][j] != rows[5][j] {
            fail("row_structure", format!("P4[{j}] ≠ P5[{j}]"));
        }
    }
    if rows[4][4] != rows[5][5] || rows[4][5] != rows[5][4] {
        fail("row_structure", "P4 and P5 do not swap in columns 4 and 5".into());
    }
    if !rows[4][p.diagonal_index].is_zero() {
        fail("row_structure", format!("B{} is not diagonal", p.diagonal_index));
    }

    for i in 0..6 {
        for k in i..6 {
            let ip = inner_product_delta(&rows[i], &rows[k], delta).expect("positive degrees");
            let expect = if i == k { Surd::from(n / &m[i]) } else { Surd::zero() };
            if ip != expect {
                fail("orthogonality", format!("(P{i},P{k})_δ = {ip}, expected {expect}"));
            }
        }
    }

    // Q_ij = m_j P_ji / δ_i and PQ = nI.
    let q: Vec<Vec<Surd>> = (0..6)
        .map(|i| (0..6).map(|j| rows[j][i].scale(&(&m[j] / &delta[i]))).collect())
        .collect();
    for i in 0..6 {
        for k in 0..6 {
            let v: Surd = (0..6).map(|j| &rows[i][j] * &q[j][k]).sum();
            let expect = if i == k { Surd::from(n.clone()) } else { Surd::zero() };
            if v != expect {
                fail("q_matrix", format!("(PQ)[{i}][{k}] = {v}, expected {expect}"));
            }
        }
    }

    let b: Vec<Mat2> = (0..6).map(|j| mat_from_column(p, j)).collect();
    let weighted = |w: &dyn Fn(usize) -> Rational| -> Mat2 {
        std::array::from_fn(|r| std::array::from_fn(|c| (0..6).map(|i| b[i][r][c].scale(&w(i))).sum()))
    };
    let zero: Mat2 = Default::default();
    let s0 = weighted(&|_| Rational::one());
    if s0 != zero {
        fail("idempotent", "ΣBi ≠ 0".into());
    }
    let s1 = weighted(&|i| &table.phi[i] / &delta[i]);
    if s1 != zero {
        fail("idempotent", "Σ(φi/δi)Bi ≠ 0".into());
    }
    let s2 = weighted(&|i| &table.chi[i] / &delta[i]);
    let nc = Surd::from(n / &table.m_chi);
    let expect: Mat2 = [[nc.clone(), Surd::zero()], [Surd::zero(), nc]];
    if s2 != expect {
        fail("idempotent", "Σ(χi/δi)Bi ≠ (n/mχ)I".into());
    }

    for (i, bi) in b.iter().enumerate() {
        let tr = trace(bi);
        if tr != Surd::from(table.chi[i].clone()) {
            fail("trace", format!("tr B{i} = {tr} ≠ χ{i}"));
        }
        let tau = Surd::from(&delta[i] + &table.m_phi * &table.phi[i]) + tr.scale(&table.m_chi);
        let expect = if i == 0 { Surd::from(n.clone()) } else { Surd::zero() };
        if tau != expect {
            fail("tau", format!("τ(b{i}) = {tau}, expected {expect}"));
        }
    }
    for i in 1..4 {
        if b[i][0][1] != b[i][1][0] {
            fail("symmetry", format!("B{i} is not symmetric"));
        }
    }
    out
}

/// b₀..b₅ realized as (δ, φ, B) triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardBasis {
    pub params: ParameterSet,
    pub table: CharacterTable,
    pub signs: SignChoice,
    pub distinct_index: usize,
    pub diagonal_index: usize,
    pub b: [Mat2; 6],
}

pub fn assemble_basis(p: &TransitionMatrix, recipe: &TransitionRecipe) -> StandardBasis {
    StandardBasis {
        params: recipe.params.clone(),
        table: recipe.table.clone(),
        signs: p.signs,
        distinct_index: recipe.distinct_index,
        diagonal_index: p.diagonal_index,
        b: std::array::from_fn(|j| mat_from_column(p, j)),
    }
}

impl StandardBasis {
    /// Builds and verifies the basis; any violated check is an error.
    pub fn construct(params: &ParameterSet, signs: SignChoice) -> Result<Self, RealizeError> {
        let recipe = TransitionRecipe::new(params, signs)?;
        let p = recipe.exact();
        let v = verify_transition(&p, &recipe.table);
        if let Some(first) = v.first() {
            return Err(RealizeError::Degenerate(format!("verification failed: {first}")));
        }
        Ok(assemble_basis(&p, &recipe))
    }

    /// The transition matrix read back from the basis.
    pub fn transition(&self) -> TransitionMatrix {
        let t = &self.table;
        let rows = std::array::from_fn(|row| {
            std::array::from_fn(|j| match row {
                0 => Surd::from(t.delta[j].clone()),
                1 => Surd::from(t.phi[j].clone()),
                2 => self.b[j][0][0].clone(),
                3 => self.b[j][1][1].clone(),
                4 => self.b[j][0][1].clone(),
                _ => self.b[j][1][0].clone(),
            })
        });
        TransitionMatrix {
            rows,
            signs: self.signs,
            diagonal_index: self.diagonal_index,
        }
    }

    /// Index of bᵢ*.
    pub fn star(i: usize) -> usize {
        match i {
            4 => 5,
            5 => 4,
            i => i,
        }
    }
}
