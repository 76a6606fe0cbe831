//! Enumeration of integral parameter sets with |φᵢ| ≤ δᵢ.
//!
//! Stages, cheapest first:
//! 1. integer loops over canonical (δ, φ) with the order bound and the
//!    linear relation built in;
//! 2. χᵢ ∈ ℤ, tested as `2·Aᵢ·S_num ≡ 0 (mod W)` with Aᵢ = δᵢ + (n−1)φᵢ,
//!    S_num = L·Σφᵢ²/δᵢ and W = (n−1)·S_num − n·L (L = lcm of the degrees);
//! 3. det Bᵢ ∈ ℤ and every λ_ijk that is rational through Cayley-Hamilton;
//! 4. the exact surd tensor.
//!
//! Stages 2 and 3 are necessary conditions: with integral λ the regular
//! representation has an integral characteristic polynomial, so the
//! eigenvalues of each Bᵢ are algebraic integers.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::realize::{SignChoice, StandardBasis};
use crate::spectrum::{CharacterTable, ParameterSet};
use crate::surd::Rational;
use crate::taxonomy::{self, Feasibility, FamilyLabel};
use crate::tensor::{lambda_tensor, StructureTensor};

pub fn canonicalize(params: &ParameterSet) -> ParameterSet {
    params.canonical()
}

/// Rational trace data of a character table: χᵢ, det Bᵢ and tr(BᵢBⱼ).
pub struct RationalTraces {
    pub table: CharacterTable,
    pub det: [Rational; 6],
    pub tr2: [[Rational; 6]; 6],
}

impl RationalTraces {
    pub fn new(table: &CharacterTable) -> Self {
        let t = table;
        // τ(bᵢbⱼ) = n·δᵢ·[j = i*] = δᵢδⱼ + m_φφᵢφⱼ + m_χ tr(BᵢBⱼ)
        let tr2: [[Rational; 6]; 6] = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut v = -(&t.delta[i] * &t.delta[j]) - &t.m_phi * &t.phi[i] * &t.phi[j];
                if j == StandardBasis::star(i) {
                    v += &(&t.n * &t.delta[i]);
                }
                v / &t.m_chi
            })
        });
        let half = Rational::new(1, 2);
        let det = std::array::from_fn(|i| (&t.chi[i] * &t.chi[i] - &tr2[i][i]) * &half);
        RationalTraces {
            table: table.clone(),
            det,
            tr2,
        }
    }

    /// tr(BₐB_bB_c) when a letter repeats or one is b₀.
    pub fn tr3(&self, a: usize, b: usize, c: usize) -> Option<Rational> {
        let chi = &self.table.chi;
        let idx = [a, b, c];
        let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != 0).collect();
        match rest.len() {
            0 => return Some(Rational::from(2)),
            1 => return Some(chi[rest[0]].clone()),
            2 => return Some(self.tr2[rest[0]][rest[1]].clone()),
            _ => {}
        }
        // tr(X²Y) = tr X·tr(XY) − det X·tr Y, and tr is cyclic.
        let x2y = |x: usize, y: usize| &chi[x] * &self.tr2[x][y] - &self.det[x] * &chi[y];
        if a == b {
            Some(x2y(a, c))
        } else if b == c {
            Some(x2y(b, a))
        } else if a == c {
            Some(x2y(a, b))
        } else {
            None
        }
    }

    /// tr(XYZ) + tr(XZY) for 2×2 matrices, always rational.
    pub fn tr3_symmetrized(&self, a: usize, b: usize, c: usize) -> Rational {
        let chi = &self.table.chi;
        &chi[a] * &self.tr2[b][c] + &chi[b] * &self.tr2[a][c] + &chi[c] * &self.tr2[a][b]
            - &chi[a] * &chi[b] * &chi[c]
    }

    fn lambda_from_trace(&self, i: usize, j: usize, k: usize, tr: &Rational) -> Rational {
        let t = &self.table;
        (&t.delta[i] * &t.delta[j] * &t.delta[k] + &t.m_phi * &t.phi[i] * &t.phi[j] * &t.phi[k] + &t.m_chi * tr)
            / (&t.n * &t.delta[k])
    }

    /// λ_ijk whenever it is determined by the character table alone.
    pub fn rational_lambda(&self, i: usize, j: usize, k: usize) -> Option<Rational> {
        let tr = self.tr3(i, j, StandardBasis::star(k))?;
        Some(self.lambda_from_trace(i, j, k, &tr))
    }

    /// δₖλ_ijk + δⱼλ_{i k* j*}, which is rational for every triple.
    pub fn paired_lambda_sum(&self, i: usize, j: usize, k: usize) -> Rational {
        let t = &self.table;
        let ks = StandardBasis::star(k);
        let s = self.tr3_symmetrized(i, j, ks);
        let two = Rational::from(2);
        (&two * (&t.delta[i] * &t.delta[j] * &t.delta[k] + &t.m_phi * &t.phi[i] * &t.phi[j] * &t.phi[k])
            + &t.m_chi * &s)
            / &t.n
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Keep,
    Cut(&'static str),
}

/// A partial assignment: degrees first, then φ-values, each in index
/// order 1..4.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Prefix {
    pub delta: Vec<i64>,
    pub phi: Vec<i64>,
}

/// Cuts a prefix when no completion can give an integral algebra with
/// |φᵢ| ≤ δᵢ and order ≤ `max_order`.
pub fn prune(prefix: &Prefix, max_order: i64, require_ta: bool) -> Verdict {
    let d = &prefix.delta;
    if d.len() > 4 || prefix.phi.len() > 4 || (!prefix.phi.is_empty() && d.len() < 4) {
        return Verdict::Cut("malformed prefix");
    }
    if d.iter().any(|&x| x <= 0) {
        return Verdict::Cut("nonpositive degree");
    }
    let mut n = 1 + d.iter().take(3).sum::<i64>();
    if d.len() == 4 {
        n += 2 * d[3];
    }
    if n > max_order {
        return Verdict::Cut("order bound");
    }
    let p = &prefix.phi;
    if p.iter().zip(d).any(|(x, y)| x.abs() > *y) {
        return Verdict::Cut("|phi| > delta");
    }
    if p.len() == 3 {
        let twice = -1 - p[0] - p[1] - p[2];
        if twice % 2 != 0 || (twice / 2).abs() > d[3] {
            return Verdict::Cut("linear relation");
        }
    }
    if p.len() < 4 {
        return Verdict::Keep;
    }
    let params = ParameterSet::from_ints([d[0], d[1], d[2], d[3]], [p[0], p[1], p[2], p[3]]);
    match params.validate() {
        Ok(()) => {}
        Err(crate::spectrum::Rejection::CommutativeDegeneration) => {
            return Verdict::Cut("commutative degeneration")
        }
        Err(_) => return Verdict::Cut("invalid parameters"),
    }
    let table = params.character_table();
    check_traces(&table, require_ta)
}

/// Stages 2 and 3 on a full parameter set.
pub fn check_traces(table: &CharacterTable, require_ta: bool) -> Verdict {
    if !table.chi.iter().all(Rational::is_integer) {
        return Verdict::Cut("chi not integral");
    }
    let rt = RationalTraces::new(table);
    if !rt.det.iter().all(Rational::is_integer) {
        return Verdict::Cut("det not integral");
    }
    for i in 1..6 {
        for j in 1..6 {
            for k in 1..6 {
                match rt.rational_lambda(i, j, k) {
                    Some(l) => {
                        if !l.is_integer() {
                            return Verdict::Cut("lambda not integral");
                        }
                        if require_ta && l.is_negative() {
                            return Verdict::Cut("lambda negative");
                        }
                    }
                    None => {
                        if !rt.paired_lambda_sum(i, j, k).is_integer() {
                            return Verdict::Cut("paired lambda sum not integral");
                        }
                    }
                }
            }
        }
    }
    Verdict::Keep
}

/// Exact tensor of a parameter set with the canonical sign choice.
pub fn exact_tensor(params: &ParameterSet) -> Option<StructureTensor> {
    StandardBasis::construct(params, SignChoice::CANONICAL)
        .ok()
        .map(|b| lambda_tensor(&b))
}

/// Canonical degree tuples (δ₁ ≥ δ₂ ≥ δ₃, δ₄) with order ≤ `max_order`.
pub fn degree_tuples(max_order: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    let mut d4 = 1;
    while 1 + 3 + 2 * d4 <= max_order {
        let budget = max_order - 1 - 2 * d4;
        for d1 in 1..=budget - 2 {
            for d2 in 1..=d1.min(budget - d1 - 1) {
                for d3 in 1..=d2.min(budget - d1 - d2) {
                    out.push([d1, d2, d3, d4]);
                }
            }
        }
        d4 += 1;
    }
    out
}

fn lcm4(d: &[i64; 4]) -> i64 {
    d.iter().fold(1i64, |a, &b| a.lcm(&b))
}

/// Stage 1 and 2 for one degree tuple: canonical φ with integral χ.
pub fn chi_candidates(d: [i64; 4]) -> Vec<[i64; 4]> {
    let [d1, d2, d3, d4] = d;
    let n = 1 + d1 + d2 + d3 + 2 * d4;
    let l = lcm4(&d);
    let (l1, l2, l3, l4) = (l / d1, l / d2, l / d3, l / d4);
    let max_d = *d.iter().max().unwrap();
    // With everything below 2^53 the f64 quotient of an exact multiple is
    // exact, so a non-integral quotient rules the candidate out.
    let bound = (l as i128) * (n as i128) * 2 * (n as i128) * (max_d as i128);
    let use_float = bound < (1i128 << 53);
    let divides = |a: i64, s: i64, w: i64| -> bool {
        let num = 2 * (a as i128) * (s as i128);
        if use_float {
            let q = num as f64 / w as f64;
            if q != q.round() {
                return false;
            }
        }
        num % (w as i128) == 0
    };
    let mut out = Vec::new();
    for p4 in -d4..=d4 {
        let a4 = d4 + (n - 1) * p4;
        for p1 in -d1..=d1 {
            let a1 = d1 + (n - 1) * p1;
            let k = -1 - p1 - 2 * p4;
            let mut lo = (-d2).max(k - d3);
            let mut hi = d2.min(k + d3);
            if d1 == d2 {
                hi = hi.min(p1);
            }
            if d2 == d3 {
                lo = lo.max((k + 1).div_euclid(2));
            }
            let base = l + l1 * p1 * p1 + 2 * l4 * p4 * p4;
            for p2 in lo..=hi {
                let p3 = k - p2;
                let s = base + l2 * p2 * p2 + l3 * p3 * p3;
                let w = (n - 1) * s - n * l;
                if w <= 0 {
                    continue;
                }
                if !divides(a1, s, w) {
                    continue;
                }
                let a2 = d2 + (n - 1) * p2;
                let a3 = d3 + (n - 1) * p3;
                if divides(a2, s, w) && divides(a3, s, w) && divides(a4, s, w) {
                    out.push([p1, p2, p3, p4]);
                }
            }
        }
    }
    out
}

/// Integral algebras for one degree tuple, as canonical parameter sets
/// with their exact tensors.
fn integral_for_degrees(d: [i64; 4], require_ta: bool) -> Vec<(ParameterSet, StructureTensor)> {
    let mut out = Vec::new();
    for p in chi_candidates(d) {
        let params = ParameterSet::from_ints(d, p);
        if params.validate().is_err() {
            continue;
        }
        if check_traces(&params.character_table(), require_ta) != Verdict::Keep {
            continue;
        }
        let Some(t) = exact_tensor(&params) else { continue };
        if t.is_integral && (!require_ta || t.is_table_algebra) {
            out.push((params, t));
        }
    }
    out
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) if j > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

/// Every integral parameter set with n ≤ `max_order`, sorted by order and
/// then canonical parameters.
pub fn integral_sets(max_order: i64, require_ta: bool, jobs: Option<usize>) -> Vec<(ParameterSet, StructureTensor)> {
    let tuples = degree_tuples(max_order);
    let mut out: Vec<(ParameterSet, StructureTensor)> = with_pool(jobs, || {
        tuples
            .par_iter()
            .with_min_len(64)
            .flat_map_iter(|&d| integral_for_degrees(d, require_ta))
            .collect()
    });
    out.sort_by(|a, b| (a.0.order(), &a.0).cmp(&(b.0.order(), &b.0)));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecordFlags {
    pub integral: bool,
    pub table_algebra: bool,
    pub integral_multiplicities: bool,
    pub primitive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub params: ParameterSet,
    pub table: CharacterTable,
    pub flags: RecordFlags,
    pub family: FamilyLabel,
    pub feasibility: Feasibility,
}

impl CensusRecord {
    pub fn new(params: ParameterSet, tensor: &StructureTensor) -> Self {
        let table = params.character_table();
        CensusRecord {
            flags: RecordFlags {
                integral: tensor.is_integral,
                table_algebra: tensor.is_table_algebra,
                integral_multiplicities: table.has_integral_multiplicities(),
                primitive: taxonomy::is_primitive(tensor),
            },
            family: taxonomy::match_family(&params, tensor),
            feasibility: taxonomy::feasibility(&params, tensor),
            table,
            params,
        }
    }
}

/// One record per equivalence class of integral parameter sets with
/// n ≤ `max_order`, in deterministic order.
pub fn enumerate(max_order: i64, require_ta: bool, jobs: Option<usize>) -> Vec<CensusRecord> {
    let sets = integral_sets(max_order, require_ta, jobs);
    with_pool(jobs, || {
        sets.par_iter()
            .map(|(p, t)| CensusRecord::new(p.clone(), t))
            .collect()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchStats {
    pub degree_tuples: usize,
    pub chi_survivors: usize,
    pub trace_survivors: usize,
    pub integral: usize,
}

/// Stage-by-stage survivor counts, for reporting.
pub fn stats(max_order: i64, require_ta: bool) -> SearchStats {
    let tuples = degree_tuples(max_order);
    let mut s = SearchStats {
        degree_tuples: tuples.len(),
        chi_survivors: 0,
        trace_survivors: 0,
        integral: 0,
    };
    for d in tuples {
        for p in chi_candidates(d) {
            s.chi_survivors += 1;
            let params = ParameterSet::from_ints(d, p);
            if params.validate().is_err() || check_traces(&params.character_table(), require_ta) != Verdict::Keep {
                continue;
            }
            s.trace_survivors += 1;
            if let Some(t) = exact_tensor(&params) {
                if t.is_integral && (!require_ta || t.is_table_algebra) {
                    s.integral += 1;
                }
            }
        }
    }
    s
}
