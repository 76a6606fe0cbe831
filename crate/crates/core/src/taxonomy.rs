//! Structural classification of rank-6 algebras: closed subsets, kernels,
//! center fusion, scheme-feasibility filters, the m_φ = 1 families and
//! family labels.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectrum::{CharacterTable, ParameterSet};
use crate::surd::Rational;
use crate::tensor::StructureTensor;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TaxonomyError {
    #[error("m_phi = {0}, expected 1")]
    NotMphiOne(Rational),
    #[error("kernel of phi has {0} elements, expected 3 or 5")]
    KernelSize(usize),
    #[error("invalid fusion subset: {0}")]
    InvalidSubset(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedSubset {
    pub indices: Vec<usize>,
    pub order: Rational,
    pub star_invariant: bool,
    pub normal: bool,
}

fn support_union(t: &StructureTensor, left: &[usize], right: &[usize]) -> Vec<bool> {
    let mut out = vec![false; t.rank];
    for &i in left {
        for &j in right {
            for (k, _) in t.product(i, j) {
                out[k] = true;
            }
        }
    }
    out
}

/// N is normal when bN = Nb (as supports) for every basis element b.
pub fn is_normal(t: &StructureTensor, subset: &[usize]) -> bool {
    (0..t.rank).all(|i| support_union(t, &[i], subset) == support_union(t, subset, &[i]))
}

/// All closed subsets, by brute force over subsets containing b₀.
pub fn closed_subsets(t: &StructureTensor) -> Vec<ClosedSubset> {
    let r = t.rank;
    let mut out = Vec::new();
    for mask in 0u32..(1 << (r - 1)) {
        let mut idx = vec![0];
        idx.extend((1..r).filter(|&i| mask & (1 << (i - 1)) != 0));
        if t.is_closed(&idx) {
            out.push(ClosedSubset {
                order: t.order_of(&idx),
                star_invariant: idx.iter().all(|&i| idx.contains(&t.star[i])),
                normal: is_normal(t, &idx),
                indices: idx,
            });
        }
    }
    out.sort_by(|a, b| (a.indices.len(), &a.indices).cmp(&(b.indices.len(), &b.indices)));
    out
}

pub fn is_primitive(t: &StructureTensor) -> bool {
    closed_subsets(t).len() == 2
}

/// Indices with φᵢ = δᵢ (always containing 0).
pub fn kernel_phi(table: &CharacterTable) -> Vec<usize> {
    (0..6).filter(|&i| table.phi[i] == table.delta[i]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterFusion {
    /// Class of the chosen ratio α ≠ 1.
    pub alpha: Rational,
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    /// (1, o(I), o(J)).
    pub degrees: [Rational; 3],
}

/// The center is a fusion subalgebra exactly when {φᵢ/δᵢ : 0 ≤ i ≤ 5}
/// has at most three elements. I is the class of the ratio α ≠ 1 with
/// the largest order (ties: smaller α); J is the rest of {1..5}.
pub fn center_fusion(params: &ParameterSet) -> Option<CenterFusion> {
    let delta = params.delta6();
    let phi = params.phi6();
    let ratios: Vec<Rational> = (0..6).map(|i| &phi[i] / &delta[i]).collect();
    let mut distinct = ratios.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() > 3 {
        return None;
    }
    let order_of = |a: &Rational| -> Rational {
        (1..6).filter(|&i| ratios[i] == *a).map(|i| delta[i].clone()).sum()
    };
    let alpha = distinct
        .iter()
        .filter(|a| **a != Rational::one())
        .max_by(|a, b| order_of(a).cmp(&order_of(b)).then(b.cmp(a)))?
        .clone();
    let i: Vec<usize> = (1..6).filter(|&k| ratios[k] == alpha).collect();
    let j: Vec<usize> = (1..6).filter(|&k| ratios[k] != alpha).collect();
    let oi: Rational = i.iter().map(|&k| delta[k].clone()).sum();
    let oj: Rational = j.iter().map(|&k| delta[k].clone()).sum();
    Some(CenterFusion {
        alpha,
        i,
        j,
        degrees: [Rational::one(), oi, oj],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rank4Profile {
    pub k: Vec<usize>,
    /// (1, o(K), o(I∖K), o(J)).
    pub degrees: [Rational; 4],
    /// (1, m_φ, m_χ, m_χ).
    pub multiplicities: [Rational; 4],
}

impl Rank4Profile {
    pub fn sorted_degrees(&self) -> Vec<Rational> {
        let mut d = self.degrees.to_vec();
        d.sort();
        d
    }
}

pub fn rank4_fusion_profile(
    params: &ParameterSet,
    fusion: &CenterFusion,
    k: &[usize],
) -> Result<Rank4Profile, TaxonomyError> {
    let star = |i: usize| match i {
        4 => 5,
        5 => 4,
        i => i,
    };
    if k.is_empty() || k.len() >= fusion.i.len() {
        return Err(TaxonomyError::InvalidSubset("K must be a nonempty proper subset of I".into()));
    }
    if !k.iter().all(|x| fusion.i.contains(x)) {
        return Err(TaxonomyError::InvalidSubset("K must lie inside I".into()));
    }
    if !k.iter().all(|&x| k.contains(&star(x))) {
        return Err(TaxonomyError::InvalidSubset("K must be *-invariant".into()));
    }
    let delta = params.delta6();
    let ok: Rational = k.iter().map(|&x| delta[x].clone()).sum();
    let rest = &fusion.degrees[1] - &ok;
    let table = params.character_table();
    Ok(Rank4Profile {
        k: k.to_vec(),
        degrees: [Rational::one(), ok, rest, fusion.degrees[2].clone()],
        multiplicities: [
            Rational::one(),
            table.m_phi.clone(),
            table.m_chi.clone(),
            table.m_chi.clone(),
        ],
    })
}

/// All rank-4 profiles from *-invariant proper nonempty K ⊂ I.
pub fn rank4_fusion_profiles(params: &ParameterSet, fusion: &CenterFusion) -> Vec<Rank4Profile> {
    let i = &fusion.i;
    let mut out = Vec::new();
    for mask in 1u32..(1 << i.len()) - 1 {
        let k: Vec<usize> = (0..i.len()).filter(|b| mask & (1 << b) != 0).map(|b| i[b]).collect();
        if let Ok(p) = rank4_fusion_profile(params, fusion, &k) {
            out.push(p);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvennessFailure {
    pub i: usize,
    pub j: usize,
    pub lambda_iji: Rational,
    pub delta_i: Rational,
}

/// In an association scheme λ_iji·δᵢ is even whenever bⱼ is symmetric,
/// j ≠ i, and δᵢ > 1. Returns every violation (empty means pass).
pub fn evenness_filter(t: &StructureTensor) -> Vec<EvennessFailure> {
    let mut out = Vec::new();
    for i in 1..t.rank {
        let Some(di) = t.degrees[i].to_integer() else { continue };
        if di <= BigInt::one() {
            continue;
        }
        for j in 1..t.rank {
            if j == i || t.star[j] != j {
                continue;
            }
            let Some(l) = t.get(i, j, i).as_integer() else { continue };
            if (&l * &di).is_odd() {
                out.push(EvennessFailure {
                    i,
                    j,
                    lambda_iji: Rational::from_integer(l),
                    delta_i: Rational::from_integer(di.clone()),
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteWitness {
    pub alpha: i64,
    pub gamma: i64,
    pub k1: i64,
    pub k2: i64,
    pub beta: i64,
    /// Index playing the role of δ = α²k₁k₂.
    pub square_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum MphiOneClass {
    /// |ker φ| = 5: wreath product of a rank-2 group over a rank-5 algebra.
    Wreath { kernel: Vec<usize>, integral_possible: bool },
    RealBipartite {
        kernel: Vec<usize>,
        thin_index: usize,
        integral_verdict: bool,
    },
    NonRealBipartite {
        kernel: Vec<usize>,
        witness: Option<BipartiteWitness>,
        integral_verdict: bool,
    },
}

impl MphiOneClass {
    pub fn integral_verdict(&self) -> bool {
        match self {
            MphiOneClass::Wreath { integral_possible, .. } => *integral_possible,
            MphiOneClass::RealBipartite { integral_verdict, .. } => *integral_verdict,
            MphiOneClass::NonRealBipartite { integral_verdict, .. } => *integral_verdict,
        }
    }
}

fn int(q: &Rational) -> Option<i64> {
    q.to_i64()
}

/// Searches for odd α, γ, k₁, k₂ with δ_a = αγk₁, δ_b = αγk₂,
/// δ_c = α²k₁k₂ and the divisibility conditions on δ₄. Role assignments
/// are tried with c running over the symmetric indices by decreasing
/// degree.
pub fn bipartite_witness(params: &ParameterSet) -> Option<BipartiteWitness> {
    let d: Vec<i64> = params.delta.iter().map(int).collect::<Option<_>>()?;
    let d4 = d[3];
    let mut roles: Vec<usize> = vec![0, 1, 2];
    roles.sort_by(|&x, &y| d[y].cmp(&d[x]).then(x.cmp(&y)));
    for &c in &roles {
        let (mut a, mut b) = match c {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        if d[a] > d[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let g = d[a].gcd(&d[b]);
        let (k1, k2) = (d[a] / g, d[b] / g);
        if d[c] % (k1 * k2) != 0 {
            continue;
        }
        let a2 = d[c] / (k1 * k2);
        let alpha = a2.sqrt();
        if alpha * alpha != a2 || g % alpha != 0 {
            continue;
        }
        let gamma = g / alpha;
        let odd = [alpha, gamma, k1, k2].iter().all(|x| x % 2 == 1);
        if !odd || alpha * alpha >= 2 * gamma {
            continue;
        }
        let divs = [
            gamma * k1 * k2,
            gamma * k1 * (alpha * gamma * k1 - 1),
            gamma * k2 * (alpha * gamma * k2 - 1),
            k1 * k2 * (alpha * alpha * k1 * k2 - 1),
        ];
        if divs.iter().any(|x| x % d4 != 0) {
            continue;
        }
        return Some(BipartiteWitness {
            alpha,
            gamma,
            k1,
            k2,
            beta: gamma * k1 * k2 / d4,
            square_index: c + 1,
        });
    }
    None
}

/// Branches on the kernel of φ for m_φ = 1 and applies the integrality
/// criteria of each family.
pub fn classify_mphi1(params: &ParameterSet, table: &CharacterTable) -> Result<MphiOneClass, TaxonomyError> {
    if table.m_phi != Rational::one() {
        return Err(TaxonomyError::NotMphiOne(table.m_phi.clone()));
    }
    let kernel = kernel_phi(table);
    match kernel.len() {
        5 => Ok(MphiOneClass::Wreath {
            kernel,
            integral_possible: false,
        }),
        3 if kernel == [0, 4, 5] => {
            let witness = bipartite_witness(params);
            Ok(MphiOneClass::NonRealBipartite {
                integral_verdict: witness.is_some(),
                witness,
                kernel,
            })
        }
        3 => {
            let thin_index = (1..4).find(|i| !kernel.contains(i)).expect("one symmetric index outside");
            let d = &params.delta;
            let (a, b) = (kernel[1] - 1, kernel[2] - 1);
            let n = params.order();
            let two = Rational::from(2);
            let verdict = d[thin_index - 1] == Rational::one()
                && d[a] == d[b]
                && d[b] == d[3]
                && (&d[a] / &two).is_integer()
                && ((n - &two) / Rational::from(8)).is_integer();
            Ok(MphiOneClass::RealBipartite {
                kernel,
                thin_index,
                integral_verdict: verdict,
            })
        }
        k => Err(TaxonomyError::KernelSize(k)),
    }
}

/// Degrees (γk₁, γk₂, k₁k₂, k₁k₂) with the non-real bipartite φ-pattern,
/// when γ = (k₁k₂+1)/(k₁+k₂) is an odd integer and k₁+k₂ divides kᵢ²−1.
pub fn lemma_2ks_generator(k1: i64, k2: i64) -> Option<ParameterSet> {
    if k1 <= 0 || k2 <= 0 || k1 % 2 == 0 || k2 % 2 == 0 || k1.gcd(&k2) != 1 {
        return None;
    }
    let s = k1 + k2;
    if (k1 * k2 + 1) % s != 0 {
        return None;
    }
    let gamma = (k1 * k2 + 1) / s;
    if gamma % 2 == 0 || (k1 * k1 - 1) % s != 0 || (k2 * k2 - 1) % s != 0 {
        return None;
    }
    let d = [gamma * k1, gamma * k2, k1 * k2, k1 * k2];
    Some(ParameterSet::from_ints(d, [-d[0], -d[1], -d[2], d[3]]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    #[serde(rename = "U⋊C2")]
    USemiC2,
    #[serde(rename = "T⋊C2")]
    TSemiC2,
    #[serde(rename = "C3:K")]
    C3K,
    #[serde(rename = "U:K-or-D")]
    UKorD,
    #[serde(rename = "T:K-or-D")]
    TKorD,
    #[serde(rename = "K:T")]
    KT,
    #[serde(rename = "PG")]
    PG,
    #[serde(rename = "p-array")]
    PArray,
    #[serde(rename = "E∘K-wreath")]
    EKWreath,
    #[serde(rename = "primitive")]
    Primitive,
    #[serde(rename = "other")]
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyLabel {
    pub tag: FamilyTag,
    pub label: String,
    pub template: BTreeMap<String, String>,
    /// Labels follow documented parameter patterns and closed-subset
    /// structure; they are not proofs of isomorphism type.
    pub best_effort: bool,
}

impl FamilyLabel {
    fn new(tag: FamilyTag, label: String, template: &[(&str, String)]) -> Self {
        FamilyLabel {
            tag,
            label,
            template: template.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            best_effort: true,
        }
    }
}

fn sym_pairs(p: &ParameterSet) -> Vec<(Rational, Rational)> {
    let mut v: Vec<(Rational, Rational)> = (0..3).map(|i| (p.delta[i].clone(), p.phi[i].clone())).collect();
    v.sort();
    v
}

fn matches(p: &ParameterSet, delta: [i64; 4], phi: [i64; 4]) -> bool {
    let q = ParameterSet::from_ints(delta, phi);
    sym_pairs(p) == sym_pairs(&q) && p.delta[3] == q.delta[3] && p.phi[3] == q.phi[3]
}

fn fmt_order(q: &Rational) -> String {
    if q.is_integer() {
        q.to_string()
    } else {
        format!("{{{q}}}")
    }
}

/// Rank-2 quotient symbol: C_2 when thin of order 2, K_t for integral
/// order t, D_t otherwise.
fn rank2_symbol(t: &Rational) -> String {
    if *t == Rational::from(2) {
        "C_2".into()
    } else if t.is_integer() {
        format!("K_{t}")
    } else {
        format!("D_{}", fmt_order(t))
    }
}

/// Labels a record by the first matching template, in this order:
/// E∘K wreath, T⋊C2 (S3 at k = 1), U⋊C2, PG(r,q), p-array, C3:K, then
/// closed-subset structure (K_m:T_{n/m} from a rank-2 closed subset,
/// T:K-or-D from {b₀,b₄,b₅}, U:K-or-D from a symmetric rank-3 normal
/// subset), primitive, other.
pub fn match_family(params: &ParameterSet, tensor: &StructureTensor) -> FamilyLabel {
    let n = params.order();
    let p = params.canonical();
    let d: Option<Vec<i64>> = p.delta.iter().map(int).collect();
    let f: Option<Vec<i64>> = p.phi.iter().map(int).collect();

    if let (Some(d), Some(f)) = (&d, &f) {
        // E∘K: one symmetric φ = −1, every other φ = 0.
        let neg: Vec<usize> = (0..3).filter(|&i| f[i] == -1).collect();
        if neg.len() == 1 && (0..4).all(|i| i == neg[0] || f[i] == 0) {
            let m = Rational::from(1 + d[neg[0]]);
            let q = &n / &m;
            return FamilyLabel::new(
                FamilyTag::EKWreath,
                format!("E_{}∘K_{}", fmt_order(&q), m),
                &[("m", m.to_string()), ("quotient_order", q.to_string())],
            );
        }
        let k = d[3];
        if matches(&p, [1, k, k, k], [-1, -k, -k, k]) {
            let label = if k == 1 { "S_3".to_string() } else { format!("T_{}⋊C_2", 2 * k + 1) };
            return FamilyLabel::new(FamilyTag::TSemiC2, label, &[("k", k.to_string())]);
        }
        if matches(&p, [1, k, k, k], [-1, k, k, -k]) {
            return FamilyLabel::new(FamilyTag::USemiC2, format!("U_{}⋊C_2", 2 * k + 1), &[("k", k.to_string())]);
        }
        for q in 2i64..=13 {
            for r in 1u32..=3 {
                let qr = q.pow(r) - 1;
                let a = q * qr / (q - 1);
                let b = q.pow(2 * r + 1) * qr / (q - 1);
                let c = q * qr.pow(3) / (q - 1).pow(3);
                let e = q.pow(r + 1) * qr.pow(2) / (q - 1).pow(2);
                let s = q.pow(r - 1);
                if 1 + a + b + c + 2 * e > 200 {
                    continue;
                }
                if matches(&p, [a, b, c, e], [-1, -s, -s, s]) {
                    return FamilyLabel::new(
                        FamilyTag::PG,
                        format!("PG({r},{q})"),
                        &[("r", r.to_string()), ("q", q.to_string())],
                    );
                }
            }
        }
        let pp = 2 * d[3] + 1;
        if pp >= 3 && matches(&p, [pp + 1, (pp * pp - 1) / 2, (pp * pp - 1) / 2, (pp - 1) / 2], [-1, -(pp - 1) / 2, -(pp - 1) / 2, (pp - 1) / 2]) {
            // p = 3 coincides with C₃:K₅.
            let label = if pp == 3 {
                "C_3:K_5, 3-array".to_string()
            } else {
                format!("T_{pp}:K_{}, {pp}-array", pp + 2)
            };
            return FamilyLabel::new(FamilyTag::PArray, label, &[("p", pp.to_string())]);
        }
        if d[3] == 1 && d[0] == d[1] && d[1] == d[2] && f == &vec![-1, -1, -1, 1] {
            return FamilyLabel::new(
                FamilyTag::C3K,
                format!("C_3:K_{}", fmt_order(&(&n / Rational::from(3)))),
                &[("l", d[0].to_string())],
            );
        }
    }

    let closed = closed_subsets(tensor);
    let proper: Vec<&ClosedSubset> = closed
        .iter()
        .filter(|c| c.indices.len() > 1 && c.indices.len() < tensor.rank)
        .collect();
    if proper.is_empty() {
        return FamilyLabel::new(FamilyTag::Primitive, "primitive".into(), &[]);
    }
    let quotient_rank = |c: &ClosedSubset| tensor.quotient(&c.indices).map(|q| q.rank).ok();
    for c in &proper {
        if c.indices.len() == 2 {
            let q = &n / &c.order;
            return FamilyLabel::new(
                FamilyTag::KT,
                format!("K_{}:T_{}", fmt_order(&c.order), fmt_order(&q)),
                &[("closed_subset", format!("{:?}", c.indices)), ("normal", c.normal.to_string())],
            );
        }
    }
    for c in &proper {
        if c.indices == [0, 4, 5] && c.normal && quotient_rank(c) == Some(2) {
            let q = &n / &c.order;
            return FamilyLabel::new(
                FamilyTag::TKorD,
                format!("T_{}:{}", fmt_order(&c.order), rank2_symbol(&q)),
                &[("normal_subset", format!("{:?}", c.indices))],
            );
        }
    }
    for c in &proper {
        if c.indices.len() == 3 && c.indices.iter().all(|&i| i < 4) && c.normal && quotient_rank(c) == Some(2) {
            let q = &n / &c.order;
            return FamilyLabel::new(
                FamilyTag::UKorD,
                format!("U_{}:{}", fmt_order(&c.order), rank2_symbol(&q)),
                &[("normal_subset", format!("{:?}", c.indices))],
            );
        }
    }
    FamilyLabel::new(FamilyTag::Other, "other".into(), &[])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteratureEntry {
    pub n: i64,
    pub kind: String,
    pub degrees: Vec<i64>,
    #[serde(default)]
    pub multiplicities: Option<Vec<i64>>,
    pub status: String,
    pub detail: String,
    pub reference: String,
}

#[derive(Deserialize)]
struct LiteratureFile {
    entries: Vec<LiteratureEntry>,
}

/// Static literature annotations keyed by fusion profile.
pub fn literature() -> Vec<LiteratureEntry> {
    let raw = include_str!("../data/literature.json");
    serde_json::from_str::<LiteratureFile>(raw)
        .expect("bundled literature file parses")
        .entries
}

fn as_ints(v: &[Rational]) -> Option<Vec<i64>> {
    v.iter().map(int).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Feasibility {
    pub evenness_failures: Vec<EvennessFailure>,
    pub center_fusion: Option<CenterFusion>,
    pub rank4_profiles: Vec<Rank4Profile>,
    pub literature: Vec<LiteratureEntry>,
}

impl Feasibility {
    pub fn passes_evenness(&self) -> bool {
        self.evenness_failures.is_empty()
    }
}

pub fn feasibility(params: &ParameterSet, tensor: &StructureTensor) -> Feasibility {
    let cf = center_fusion(params);
    let profiles = cf.as_ref().map(|c| rank4_fusion_profiles(params, c)).unwrap_or_default();
    let n = int(&params.order());
    let mut lit = Vec::new();
    for e in literature() {
        if Some(e.n) != n {
            continue;
        }
        let hit = match e.kind.as_str() {
            "srg" => cf.as_ref().and_then(|c| as_ints(&c.degrees)).is_some_and(|mut d| {
                d.sort();
                d == e.degrees
            }),
            _ => profiles.iter().any(|p| {
                as_ints(&p.sorted_degrees()).as_deref() == Some(&e.degrees[..])
                    && e.multiplicities.as_deref() == as_ints(&p.multiplicities).as_deref()
            }),
        };
        if hit {
            lit.push(e);
        }
    }
    Feasibility {
        evenness_failures: evenness_filter(tensor),
        center_fusion: cf,
        rank4_profiles: profiles,
        literature: lit,
    }
}

/// Whether a rational is a perfect square of a rational.
pub fn is_rational_square(q: &Rational) -> bool {
    if q.is_negative() {
        return false;
    }
    let sq = |x: &BigInt| {
        let r = x.sqrt();
        &r * &r == *x
    };
    sq(q.numer()) && sq(q.denom())
}
