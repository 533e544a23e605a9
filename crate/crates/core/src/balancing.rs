//! Codimension-one balancing and the `(i,k)`-balancing relations at every cone.
//!
//! For a flag `F_0 ⊊ … ⊊ F_d` of type `(r_0, …, r_d)`, a position `0 ≤ i < d` and
//! `1 ≤ k ≤ r_{i+1} - r_i`, the `(i,k)` relation is
//!
//! ```text
//!   Σ_{F_i = F⁰ ⋖ … ⋖ Fᵏ ≤ F_{i+1}} (e_{Fᵏ} - e_{Fᵏ⁻¹})
//! + Σ_{l=1}^{k-1} (-1)^{k-l} Σ_{F_i = F⁰ ⋖ … ⋖ Fˡ ≤ F_{i+1}} (e_{F_{i+1}} - e_{Fˡ⁻¹})
//! + (-1)^k (e_{F_{i+1}} - e_{F_i})  =  0.
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;
use rayon::prelude::*;

use crate::combination::FlatCombination;
use crate::error::{Error, Result};
use crate::fan::{cone_witness, BergmanFan, ConeType, FlagOfFlats};
use crate::matroid::{Flat, Matroid};
use crate::set::ElementSet;
use crate::vector::RationalVector;

/// A cover chain `F⁰ ⋖ F¹ ⋖ … ⋖ Fˡ`.
pub type Chain = Vec<Flat>;

/// All cover chains `f = F⁰ ⋖ … ⋖ F^len` with `F^len ⊆ g`, in lexicographic order.
pub fn chains_between(m: &Matroid, f: &Flat, g: &Flat, len: usize) -> Result<Vec<Chain>> {
    m.flat(f.set())?;
    m.flat(g.set())?;
    if !f.set().is_subset(g.set()) {
        return Err(Error::NotNested { lower: f.set(), upper: g.set() });
    }
    Ok(chains_by_length(m, f, g, len).pop().unwrap_or_default())
}

/// `out[l]` holds the cover chains of length `l` from `f` inside `g`, for `l ≤ max_len`.
fn chains_by_length(m: &Matroid, f: &Flat, g: &Flat, max_len: usize) -> Vec<Vec<Chain>> {
    fn walk(m: &Matroid, g: ElementSet, chain: &mut Chain, max_len: usize, out: &mut [Vec<Chain>]) {
        let l = chain.len() - 1;
        out[l].push(chain.clone());
        if l == max_len {
            return;
        }
        let last = *chain.last().unwrap();
        for c in m.covers_of(&last).expect("chain entries are flats") {
            if c.set().is_subset(g) {
                chain.push(c);
                walk(m, g, chain, max_len, out);
                chain.pop();
            }
        }
    }
    let mut out = vec![Vec::new(); max_len + 1];
    walk(m, g.set(), &mut vec![*f], max_len, &mut out);
    out
}

fn check_position(flag: &FlagOfFlats, i: usize) -> Result<()> {
    if i < flag.dim() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { i, d: flag.dim() })
    }
}

/// `Σ_{F_i ⋖ F' ≤ F_{i+1}} e_{F'}` together with the number `m` of such covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codim1Sum {
    pub vector: RationalVector,
    pub m_count: usize,
}

impl Codim1Sum {
    /// `e_{F_{i+1}} + (m - 1) e_{F_i}`.
    pub fn closed_form(&self, flag: &FlagOfFlats, i: usize) -> RationalVector {
        let n = self.vector.len();
        let mut v = RationalVector::indicator(flag.flat(i + 1).set(), n);
        v.add_indicator(flag.flat(i).set(), &BigRational::from_integer((self.m_count as i64 - 1).into()));
        v
    }
}

pub fn codim1_sum(m: &Matroid, flag: &FlagOfFlats, i: usize) -> Result<Codim1Sum> {
    check_position(flag, i)?;
    let covers = m.covers_within(flag.flat(i), flag.flat(i + 1))?;
    let one = BigRational::from_integer(1.into());
    let mut vector = RationalVector::zeros(m.n());
    for c in &covers {
        vector.add_indicator(c.set(), &one);
    }
    Ok(Codim1Sum { vector, m_count: covers.len() })
}

/// Which sum of the relation a term belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermGroup {
    /// `e_{Fᵏ} - e_{Fᵏ⁻¹}` over chains of length `k`.
    Chains,
    /// `(-1)^{k-l} (e_{F_{i+1}} - e_{Fˡ⁻¹})` over chains of length `l`.
    Alternating(usize),
    /// `(-1)^k (e_{F_{i+1}} - e_{F_i})`.
    Closing,
}

/// One summand `coefficient · (e_plus - e_minus)` of a relation, indexed by its chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub group: TermGroup,
    pub chain: Vec<ElementSet>,
    pub coefficient: i64,
    pub plus: ElementSet,
    pub minus: ElementSet,
}

impl Term {
    pub fn vector(&self, n: usize) -> RationalVector {
        let c = BigRational::from_integer(self.coefficient.into());
        let mut v = RationalVector::zeros(n);
        v.add_indicator(self.plus, &c);
        v.add_indicator(self.minus, &-c);
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancingRelation {
    pub flag: FlagOfFlats,
    pub i: usize,
    pub k: usize,
    pub lhs: RationalVector,
    pub terms: Vec<Term>,
}

impl BalancingRelation {
    pub fn is_balanced(&self) -> bool {
        self.lhs.is_zero()
    }

    /// `k < r_{i+1} - r_i`; the relations with `k` equal to the gap are the degenerate ones.
    pub fn is_nontrivial(&self) -> bool {
        self.k < self.flag.cone_type().gap(self.i)
    }

    /// The relation as a formal combination of flat symbols, after cancellation.
    /// `e_∅` is kept as a symbol even though it evaluates to zero.
    pub fn symbolic(&self) -> FlatCombination {
        symbolic_of(&self.terms)
    }

    /// The signed sum of the term vectors, evaluated term by term.
    pub fn terms_sum(&self) -> RationalVector {
        let n = self.lhs.len();
        self.terms.iter().fold(RationalVector::zeros(n), |acc, t| &acc + &t.vector(n))
    }

    /// Whether both relations have the same signed `e_F` terms after cancellation,
    /// up to multiplying the whole relation by `-1`.
    pub fn rearranges(&self, other: &BalancingRelation) -> bool {
        let (a, b) = (self.symbolic(), other.symbolic());
        a == b || a == b.negated()
    }
}

fn symbolic_of(terms: &[Term]) -> FlatCombination {
    let mut acc: HashMap<ElementSet, i64> = HashMap::new();
    for t in terms {
        *acc.entry(t.plus).or_default() += t.coefficient;
        *acc.entry(t.minus).or_default() -= t.coefficient;
    }
    acc.into_iter().collect()
}

fn sign(exp: usize) -> i64 {
    if exp.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Evaluates the `(i,k)`-balancing relation at `flag`, with its full term ledger.
pub fn balancing_lhs(m: &Matroid, flag: &FlagOfFlats, i: usize, k: usize) -> Result<BalancingRelation> {
    check_position(flag, i)?;
    let gap = flag.cone_type().gap(i);
    if k < 1 || k > gap {
        return Err(Error::KOutOfRange { k, min: 1, max: gap });
    }
    let (lower, upper) = (flag.flat(i), flag.flat(i + 1));
    let chains = chains_by_length(m, lower, upper, k);
    let sets = |c: &Chain| c.iter().map(Flat::set).collect::<Vec<_>>();

    let mut terms = Vec::new();
    for c in &chains[k] {
        terms.push(Term {
            group: TermGroup::Chains,
            chain: sets(c),
            coefficient: 1,
            plus: c[k].set(),
            minus: c[k - 1].set(),
        });
    }
    for (l, chains_l) in chains.iter().enumerate().take(k).skip(1) {
        for c in chains_l {
            terms.push(Term {
                group: TermGroup::Alternating(l),
                chain: sets(c),
                coefficient: sign(k - l),
                plus: upper.set(),
                minus: c[l - 1].set(),
            });
        }
    }
    terms.push(Term {
        group: TermGroup::Closing,
        chain: vec![lower.set()],
        coefficient: sign(k),
        plus: upper.set(),
        minus: lower.set(),
    });
    let lhs = symbolic_of(&terms).evaluate(m.n());
    Ok(BalancingRelation { flag: flag.clone(), i, k, lhs, terms })
}

/// Result of rewriting `(i,1)`-balancing as a cone-membership statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricForm {
    /// `Σ e_{F'_{i+1}}` over the flags `F'` of type `(r_0,…,r_i, r_i+1, r_{i+1},…,r_d)` containing the cone.
    pub sum: RationalVector,
    pub m_count: usize,
    pub matches_closed_form: bool,
    /// `(F_j, λ_j)` with `sum = Σ λ_j e_{F_j}` and `λ_j ≥ 0` for `j < d`.
    pub witness: Option<Vec<(Flat, BigRational)>>,
}

/// The `(i,1)` relation read off the cones of the fan that contain `flag`.
pub fn geometric_i1_form(fan: &BergmanFan, flag: &FlagOfFlats, i: usize) -> Result<GeometricForm> {
    check_position(flag, i)?;
    let n = fan.n();
    let ty = flag.cone_type();
    let (sum, m_count) = if ty.gap(i) == 1 {
        (RationalVector::indicator(flag.flat(i + 1).set(), n), 1)
    } else {
        let mut ranks = ty.ranks().to_vec();
        ranks.insert(i + 1, ranks[i] + 1);
        let target = ConeType::new(ranks);
        let one = BigRational::from_integer(1.into());
        let mut sum = RationalVector::zeros(n);
        let mut count = 0;
        for cone in fan.cofaces(flag) {
            if cone.cone_type == target {
                sum.add_indicator(cone.flag.flat(i + 1).set(), &one);
                count += 1;
            }
        }
        (sum, count)
    };
    let mut closed = RationalVector::indicator(flag.flat(i + 1).set(), n);
    closed.add_indicator(flag.flat(i).set(), &BigRational::from_integer((m_count as i64 - 1).into()));
    let witness = cone_witness(flag, &sum)?;
    Ok(GeometricForm { matches_closed_form: closed == sum, sum, m_count, witness })
}

/// `Σ_{l=2}^k (-1)^k Σ_{F_i ⋖ F¹ ⋖ … ⋖ Fˡ ≤ F_{i+1}} e_{Fˡ⁻¹}` for `k = r_{i+1} - r_i > 1`;
/// this lies in the linear span of the cone.
pub fn residual_sum(m: &Matroid, flag: &FlagOfFlats, i: usize, k: usize) -> Result<RationalVector> {
    check_position(flag, i)?;
    let gap = flag.cone_type().gap(i);
    if k != gap || k <= 1 {
        return Err(Error::KOutOfRange { k, min: gap.max(2), max: gap });
    }
    let chains = chains_by_length(m, flag.flat(i), flag.flat(i + 1), k);
    let c = BigRational::from_integer(sign(k).into());
    let mut v = RationalVector::zeros(m.n());
    for (l, chains_l) in chains.iter().enumerate().skip(2) {
        for chain in chains_l {
            v.add_indicator(chain[l - 1].set(), &c);
        }
    }
    Ok(v)
}

/// Outcome of checking every relation at every cone of a fan.
#[derive(Clone, Debug, Default)]
pub struct BalancingReport {
    pub relations_checked: usize,
    pub nontrivial_checked: usize,
    /// Relation counts per cone type and `(i, k)`.
    pub by_type: BTreeMap<ConeType, BTreeMap<(usize, usize), usize>>,
    /// Cone types carrying at least one relation with `k < r_{i+1} - r_i`.
    pub nontrivial_types: BTreeSet<ConeType>,
    pub violations: Vec<BalancingRelation>,
    pub codim1_checked: usize,
    /// `(flag, i)` where the codimension-one sum missed its closed form or the cone.
    pub codim1_failures: Vec<(FlagOfFlats, usize)>,
}

impl BalancingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.codim1_failures.is_empty()
    }
}

#[derive(Default)]
struct FlagOutcome {
    relations: Vec<(usize, usize, bool)>,
    violations: Vec<BalancingRelation>,
    codim1_failures: Vec<usize>,
}

fn check_flag(m: &Matroid, flag: &FlagOfFlats) -> Result<FlagOutcome> {
    let ty = flag.cone_type();
    let mut out = FlagOutcome::default();
    for i in 0..flag.dim() {
        let s = codim1_sum(m, flag, i)?;
        if s.vector != s.closed_form(flag, i) || cone_witness(flag, &s.vector)?.is_none() {
            out.codim1_failures.push(i);
        }
        for k in 1..=ty.gap(i) {
            let rel = balancing_lhs(m, flag, i, k)?;
            out.relations.push((i, k, k < ty.gap(i)));
            if !rel.is_balanced() {
                out.violations.push(rel);
            }
        }
    }
    Ok(out)
}

/// Evaluates every `(i,k)` relation and every codimension-one sum at every cone.
///
/// Violations are collected, never raised, so a systematic error shows up across all types.
pub fn verify_fan(fan: &BergmanFan) -> Result<BalancingReport> {
    let m = fan.matroid();
    let cones: Vec<_> = fan.all_cones().collect();
    let outcomes = cones.par_iter().map(|c| check_flag(m, &c.flag)).collect::<Result<Vec<_>>>()?;
    let mut report = BalancingReport::default();
    for (cone, outcome) in cones.iter().zip(outcomes) {
        let per_type = report.by_type.entry(cone.cone_type.clone()).or_default();
        for (i, k, nontrivial) in outcome.relations {
            *per_type.entry((i, k)).or_insert(0) += 1;
            report.relations_checked += 1;
            if nontrivial {
                report.nontrivial_checked += 1;
                report.nontrivial_types.insert(cone.cone_type.clone());
            }
        }
        report.codim1_checked += cone.dim;
        report.codim1_failures.extend(outcome.codim1_failures.into_iter().map(|i| (cone.flag.clone(), i)));
        report.violations.extend(outcome.violations);
    }
    Ok(report)
}

pub fn verify_all(m: &Matroid) -> Result<BalancingReport> {
    verify_fan(&BergmanFan::build(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(elems: &[usize]) -> ElementSet {
        elems.iter().copied().collect()
    }

    fn flag(m: &Matroid, inner: &[&[usize]]) -> FlagOfFlats {
        let sets: Vec<ElementSet> = inner.iter().map(|s| set(s)).collect();
        FlagOfFlats::from_intermediate(m, &sets).unwrap()
    }

    fn v(x: &[i64]) -> RationalVector {
        RationalVector::from_integers(x.iter().copied())
    }

    #[test]
    fn chains_between_examples() {
        let m = Matroid::uniform(3, 4).unwrap();
        let empty = m.flat(ElementSet::empty()).unwrap();
        assert_eq!(chains_between(&m, &empty, &m.top(), 2).unwrap().len(), 12);
        assert_eq!(chains_between(&m, &empty, &m.top(), 0).unwrap(), vec![vec![empty]]);
        let pair = m.flat(set(&[0, 1])).unwrap();
        assert_eq!(chains_between(&m, &empty, &pair, 1).unwrap().len(), 2);
        let other = m.flat(set(&[2])).unwrap();
        assert!(chains_between(&m, &pair, &other, 1).is_err());
    }

    #[test]
    fn codim1_examples() {
        let m = Matroid::uniform(3, 4).unwrap();
        let f = flag(&m, &[&[0]]);
        let s = codim1_sum(&m, &f, 1).unwrap();
        assert_eq!((s.vector.clone(), s.m_count), (v(&[3, 1, 1, 1]), 3));
        assert_eq!(s.closed_form(&f, 1), s.vector);
        let s = codim1_sum(&m, &f, 0).unwrap();
        assert_eq!((s.vector, s.m_count), (v(&[1, 0, 0, 0]), 1));
        let f = flag(&m, &[&[0, 1]]);
        let s = codim1_sum(&m, &f, 0).unwrap();
        assert_eq!((s.vector, s.m_count), (v(&[1, 1, 0, 0]), 2));
        assert_eq!(codim1_sum(&m, &f, 2).unwrap_err(), Error::IndexOutOfRange { i: 2, d: 2 });
    }

    #[test]
    fn u34_top_cone_k2_breakdown() {
        let m = Matroid::uniform(3, 4).unwrap();
        let rel = balancing_lhs(&m, &flag(&m, &[]), 0, 2).unwrap();
        assert!(rel.lhs.is_zero());
        let group_sum = |pred: &dyn Fn(TermGroup) -> bool| {
            rel.terms.iter().filter(|t| pred(t.group)).fold(RationalVector::zeros(4), |acc, t| &acc + &t.vector(4))
        };
        assert_eq!(group_sum(&|g| g == TermGroup::Chains), v(&[3, 3, 3, 3]));
        assert_eq!(group_sum(&|g| g == TermGroup::Alternating(1)), v(&[-4, -4, -4, -4]));
        assert_eq!(group_sum(&|g| g == TermGroup::Closing), v(&[1, 1, 1, 1]));
        assert_eq!(rel.terms.len(), 12 + 4 + 1);
    }

    #[test]
    fn trivial_k1_relation_is_literal_cancellation() {
        let m = Matroid::uniform(3, 4).unwrap();
        let f = flag(&m, &[&[0], &[0, 1]]);
        for i in 0..3 {
            let rel = balancing_lhs(&m, &f, i, 1).unwrap();
            assert_eq!(rel.terms.len(), 2);
            assert_eq!(rel.terms[0].coefficient, -rel.terms[1].coefficient);
            assert_eq!((rel.terms[0].plus, rel.terms[0].minus), (rel.terms[1].plus, rel.terms[1].minus));
            assert!(rel.symbolic().is_zero());
        }
    }

    #[test]
    fn u34_codim1_relation() {
        let m = Matroid::uniform(3, 4).unwrap();
        let rel = balancing_lhs(&m, &flag(&m, &[&[0]]), 1, 1).unwrap();
        assert!(rel.is_balanced());
        assert!(rel.is_nontrivial());
        assert_eq!(rel.terms.len(), 4);
    }

    #[test]
    fn k_and_i_bounds() {
        let m = Matroid::uniform(3, 4).unwrap();
        let f = flag(&m, &[&[0]]);
        assert_eq!(balancing_lhs(&m, &f, 0, 2).unwrap_err(), Error::KOutOfRange { k: 2, min: 1, max: 1 });
        assert_eq!(balancing_lhs(&m, &f, 1, 0).unwrap_err(), Error::KOutOfRange { k: 0, min: 1, max: 2 });
        assert!(matches!(balancing_lhs(&m, &f, 2, 1), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn geometric_examples() {
        let fan = BergmanFan::build(&Matroid::uniform(3, 4).unwrap()).unwrap();
        let m = fan.matroid();
        let g = geometric_i1_form(&fan, &flag(m, &[&[0]]), 1).unwrap();
        assert_eq!((g.sum.clone(), g.m_count), (v(&[3, 1, 1, 1]), 3));
        assert!(g.matches_closed_form);
        let lambda: Vec<_> = g.witness.unwrap().into_iter().map(|(f, l)| (f.set(), l)).collect();
        assert_eq!(
            lambda,
            vec![(set(&[0]), BigRational::from_integer(2.into())), (m.full_set(), BigRational::from_integer(1.into()))]
        );
        let g = geometric_i1_form(&fan, &flag(m, &[&[0]]), 0).unwrap();
        assert_eq!((g.sum, g.m_count), (v(&[1, 0, 0, 0]), 1));
        let g = geometric_i1_form(&fan, &flag(m, &[]), 0).unwrap();
        assert_eq!((g.sum, g.m_count), (v(&[1, 1, 1, 1]), 4));
        assert!(g.matches_closed_form);
    }

    #[test]
    fn residual_examples() {
        let fan = BergmanFan::build(&Matroid::uniform(3, 4).unwrap()).unwrap();
        let m = fan.matroid();
        let top = flag(m, &[]);
        // 12 chains of length 2 each contribute a singleton, 12 of length 3 a pair; sign (-1)^3
        assert_eq!(residual_sum(m, &top, 0, 3).unwrap(), v(&[-9, -9, -9, -9]));
        let f = flag(m, &[&[0]]);
        let r = residual_sum(m, &f, 1, 2).unwrap();
        assert_eq!(r, v(&[3, 1, 1, 1]));
        assert!(crate::fan::in_span(&f, &r).unwrap());
        assert!(matches!(residual_sum(m, &top, 0, 2), Err(Error::KOutOfRange { .. })));
        assert!(matches!(residual_sum(m, &f, 0, 1), Err(Error::KOutOfRange { .. })));
    }

    #[test]
    fn degenerate_relation_is_negated_predecessor() {
        let m = Matroid::uniform(3, 4).unwrap();
        let top = flag(&m, &[]);
        let r3 = balancing_lhs(&m, &top, 0, 3).unwrap();
        let r2 = balancing_lhs(&m, &top, 0, 2).unwrap();
        assert_eq!(r3.symbolic(), r2.symbolic().negated());
        assert!(r3.rearranges(&r2));
        let r1 = balancing_lhs(&m, &top, 0, 1).unwrap();
        assert!(!r2.rearranges(&r1));
    }

    #[test]
    fn verify_u34() {
        let report = verify_all(&Matroid::uniform(3, 4).unwrap()).unwrap();
        assert!(report.passed());
        let types: Vec<String> = report.nontrivial_types.iter().map(ToString::to_string).collect();
        assert_eq!(types, vec!["(0,3)", "(0,1,3)", "(0,2,3)"]);
        // (0,3): 3 relations; (0,1,3): 1+2 each of 4; (0,2,3): 2+1 each of 6; (0,1,2,3): 3 each of 12
        assert_eq!(report.relations_checked, 3 + 12 + 18 + 36);
        assert_eq!(report.nontrivial_checked, 2 + 4 + 6);
    }

    #[test]
    fn verify_rank_one() {
        let report = verify_all(&Matroid::uniform(1, 5).unwrap()).unwrap();
        assert_eq!(report.relations_checked, 1);
        assert!(report.passed());
    }
}
