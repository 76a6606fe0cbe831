//! Parameter sets and character tables of noncommutative rank-6 RBAs.
//!
//! Index convention: b₀ is the identity, b₁..b₃ are symmetric, and b₅ = b₄*.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surd::Rational;

/// Degrees δ₁..δ₄ and φ-values φ₁..φ₄. δ₀ = φ₀ = 1, δ₅ = δ₄, φ₅ = φ₄.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParameterSet {
    pub delta: [Rational; 4],
    pub phi: [Rational; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParamsParseError {
    #[error("parse error at position {pos}: {msg}")]
    At { pos: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    /// Some δᵢ ≤ 0.
    NonPositiveDegree { index: usize },
    /// 1 + φ₁ + φ₂ + φ₃ + 2φ₄ ≠ 0.
    LinearRelation { sum: Rational },
    /// φᵢ/δᵢ = φ₄/δ₄ for every symmetric i.
    CommutativeDegeneration,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NonPositiveDegree { index } => {
                write!(f, "degree δ{index} is not positive")
            }
            Rejection::LinearRelation { sum } => {
                write!(f, "linear relation fails: 1 + φ1 + φ2 + φ3 + 2φ4 = {sum} ≠ 0")
            }
            Rejection::CommutativeDegeneration => write!(
                f,
                "commutative degeneration: φi/δi = φ4/δ4 for all symmetric i"
            ),
        }
    }
}

impl ParameterSet {
    pub fn new(delta: [Rational; 4], phi: [Rational; 4]) -> Self {
        ParameterSet { delta, phi }
    }

    pub fn from_ints(delta: [i64; 4], phi: [i64; 4]) -> Self {
        ParameterSet {
            delta: delta.map(Rational::from),
            phi: phi.map(Rational::from),
        }
    }

    /// δ₀..δ₅.
    pub fn delta6(&self) -> [Rational; 6] {
        let d = &self.delta;
        [
            Rational::one(),
            d[0].clone(),
            d[1].clone(),
            d[2].clone(),
            d[3].clone(),
            d[3].clone(),
        ]
    }

    /// φ₀..φ₅.
    pub fn phi6(&self) -> [Rational; 6] {
        let p = &self.phi;
        [
            Rational::one(),
            p[0].clone(),
            p[1].clone(),
            p[2].clone(),
            p[3].clone(),
            p[3].clone(),
        ]
    }

    pub fn order(&self) -> Rational {
        self.delta6().iter().cloned().sum()
    }

    /// φᵢ/δᵢ for i = 1..4 (index 0 of the result is i = 1).
    pub fn ratios(&self) -> [Rational; 4] {
        std::array::from_fn(|i| &self.phi[i] / &self.delta[i])
    }

    pub fn is_integral(&self) -> bool {
        self.delta.iter().chain(self.phi.iter()).all(Rational::is_integer)
    }

    pub fn validate(&self) -> Result<(), Rejection> {
        for (i, d) in self.delta.iter().enumerate() {
            if !d.is_positive() {
                return Err(Rejection::NonPositiveDegree { index: i + 1 });
            }
        }
        let r = self.ratios();
        if r[..3].iter().all(|x| *x == r[3]) {
            return Err(Rejection::CommutativeDegeneration);
        }
        let p = &self.phi;
        let sum = Rational::one() + &p[0] + &p[1] + &p[2] + &p[3] * Rational::from(2);
        if !sum.is_zero() {
            return Err(Rejection::LinearRelation { sum });
        }
        Ok(())
    }

    /// Applies a permutation of the symmetric indices: slot `k` of the
    /// result holds old index `perm[k]` (all 0-based among 1..3).
    pub fn permute_symmetric(&self, perm: [usize; 3]) -> Self {
        let mut out = self.clone();
        for k in 0..3 {
            out.delta[k] = self.delta[perm[k]].clone();
            out.phi[k] = self.phi[perm[k]].clone();
        }
        out
    }

    /// Canonical representative under permutations of b₁, b₂, b₃: pairs
    /// (δᵢ, φᵢ) sorted descending.
    pub fn canonical(&self) -> Self {
        let mut pairs: Vec<(Rational, Rational)> = (0..3)
            .map(|i| (self.delta[i].clone(), self.phi[i].clone()))
            .collect();
        pairs.sort_by(|a, b| b.cmp(a));
        let mut out = self.clone();
        for (k, (d, p)) in pairs.into_iter().enumerate() {
            out.delta[k] = d;
            out.phi[k] = p;
        }
        out
    }

    pub fn character_table(&self) -> CharacterTable {
        CharacterTable::of(self)
    }
}

impl fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[Rational; 4]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{};{}", j(&self.delta), j(&self.phi))
    }
}

impl FromStr for ParameterSet {
    type Err = ParamsParseError;

    /// `"d1,d2,d3,d4;p1,p2,p3,p4"`, entries rational.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |pos: usize, msg: String| ParamsParseError::At { pos, msg };
        let Some(semi) = s.find(';') else {
            return Err(err(s.len(), "expected ';' between degrees and φ-values".into()));
        };
        let parse_four = |part: &str, base: usize| -> Result<[Rational; 4], ParamsParseError> {
            let mut out = Vec::with_capacity(4);
            let mut pos = base;
            for field in part.split(',') {
                let q: Rational = field.parse().map_err(|e| match e {
                    crate::surd::SurdError::Parse { pos: p, msg } => err(pos + p, msg),
                    other => err(pos, other.to_string()),
                })?;
                out.push(q);
                pos += field.len() + 1;
            }
            let n = out.len();
            out.try_into()
                .map_err(|_| err(base, format!("expected 4 comma-separated values, found {n}")))
        };
        let delta = parse_four(&s[..semi], 0)?;
        let phi = parse_four(&s[semi + 1..], semi + 1)?;
        Ok(ParameterSet { delta, phi })
    }
}

/// Order, multiplicities and χ-row of a valid parameter set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterTable {
    pub n: Rational,
    pub m_phi: Rational,
    pub m_chi: Rational,
    pub delta: [Rational; 6],
    pub phi: [Rational; 6],
    pub chi: [Rational; 6],
}

impl CharacterTable {
    /// Panics if `params` does not validate.
    pub fn of(params: &ParameterSet) -> Self {
        params
            .validate()
            .unwrap_or_else(|r| panic!("character table of invalid parameters: {r}"));
        let delta = params.delta6();
        let phi = params.phi6();
        let n = params.order();
        let s: Rational = (0..6).map(|i| &phi[i] * &phi[i] / &delta[i]).sum();
        let m_phi = &n / &s;
        let m_chi = (&n - Rational::one() - &m_phi) / Rational::from(2);
        assert!(m_chi.is_positive(), "m_chi must be positive for valid parameters");
        let chi = std::array::from_fn(|i| {
            if i == 0 {
                Rational::from(2)
            } else {
                -(&delta[i] + &m_phi * &phi[i]) / &m_chi
            }
        });
        CharacterTable {
            n,
            m_phi,
            m_chi,
            delta,
            phi,
            chi,
        }
    }

    /// Multiplicities (1, m_φ, m_χ, m_χ, m_χ, m_χ) indexed like the rows
    /// of the transition matrix.
    pub fn row_multiplicities(&self) -> [Rational; 6] {
        [
            Rational::one(),
            self.m_phi.clone(),
            self.m_chi.clone(),
            self.m_chi.clone(),
            self.m_chi.clone(),
            self.m_chi.clone(),
        ]
    }

    pub fn has_integral_multiplicities(&self) -> bool {
        self.m_phi.is_integer() && self.m_chi.is_integer()
    }

    pub fn is_integral(&self) -> bool {
        self.chi.iter().all(Rational::is_integer) && self.has_integral_multiplicities()
    }
}
