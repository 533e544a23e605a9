//! The Bergman fan `B(M)`: one cone per flag of flats `∅ = F_0 ⊊ … ⊊ F_d = E`.
//!
//! The cone of a flag is `Σ_{0<j<d} R≥0·e_{F_j} + R·e_E`. Since `e_{F_0} = 0`
//! its coefficient plays no role and is dropped throughout.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matroid::{Flat, Matroid};
use crate::set::ElementSet;
use crate::vector::RationalVector;

pub const DEFAULT_MAX_FLATS: usize = 1 << 16;

/// Rank sequence `(r_0, …, r_d)` of a flag.
///
/// Orders by length first, then lexicographically, so `(0,3) < (0,1,3) < (0,2,3) < (0,1,2,3)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConeType(Vec<usize>);

impl ConeType {
    pub fn new(ranks: Vec<usize>) -> Self {
        ConeType(ranks)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// `r_{i+1} - r_i`.
    pub fn gap(&self, i: usize) -> usize {
        self.0[i + 1] - self.0[i]
    }
}

impl Ord for ConeType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ConeType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ConeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for ConeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A strictly increasing chain of flats from `∅` to `E`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FlagOfFlats {
    chain: Vec<Flat>,
}

impl FlagOfFlats {
    /// Validates a full chain `F_0, …, F_d`.
    pub fn new(m: &Matroid, sets: &[ElementSet]) -> Result<Self> {
        match (sets.first(), sets.last()) {
            (Some(first), Some(last)) if first.is_empty() && *last == m.full_set() => {}
            _ => return Err(Error::InvalidFlag("a flag must start at the empty set and end at E".into())),
        }
        if m.has_loops() {
            return Err(Error::HasLoops);
        }
        let chain = sets.iter().map(|&s| m.flat(s)).collect::<Result<Vec<_>>>()?;
        if chain.windows(2).any(|w| !w[0].set().is_proper_subset(w[1].set())) {
            return Err(Error::InvalidFlag("flats must be strictly increasing".into()));
        }
        Ok(FlagOfFlats { chain })
    }

    /// Like [`FlagOfFlats::new`], adding `∅` and `E` when they are missing.
    pub fn from_intermediate(m: &Matroid, sets: &[ElementSet]) -> Result<Self> {
        let mut full = Vec::with_capacity(sets.len() + 2);
        if sets.first() != Some(&ElementSet::empty()) {
            full.push(ElementSet::empty());
        }
        full.extend_from_slice(sets);
        if sets.last() != Some(&m.full_set()) {
            full.push(m.full_set());
        }
        Self::new(m, &full)
    }

    pub fn flats(&self) -> &[Flat] {
        &self.chain
    }

    pub fn sets(&self) -> Vec<ElementSet> {
        self.chain.iter().map(Flat::set).collect()
    }

    /// `F_j`.
    pub fn flat(&self, j: usize) -> &Flat {
        &self.chain[j]
    }

    /// `d`, the dimension of the cone (the lineality line counts).
    pub fn dim(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn cone_type(&self) -> ConeType {
        ConeType(self.chain.iter().map(Flat::rank).collect())
    }

    pub fn contains_flat(&self, set: ElementSet) -> bool {
        self.chain.iter().any(|f| f.set() == set)
    }

    /// `|self| ⊆ |other|`, i.e. the cone of `self` is a face of the cone of `other`.
    pub fn is_face_of(&self, other: &FlagOfFlats) -> bool {
        self.chain.iter().all(|f| other.contains_flat(f.set()))
    }

    /// The flag whose flat set is `|self| ∩ |other|`.
    pub fn intersect(&self, other: &FlagOfFlats) -> FlagOfFlats {
        FlagOfFlats { chain: self.chain.iter().filter(|f| other.contains_flat(f.set())).copied().collect() }
    }

    /// The flag with `f` inserted, if `f` fits strictly between two consecutive flats.
    pub fn insert(&self, f: Flat) -> Option<FlagOfFlats> {
        let pos = self.chain.iter().position(|g| !g.set().is_proper_subset(f.set()))?;
        if pos == 0 || !f.set().is_proper_subset(self.chain[pos].set()) {
            return None;
        }
        let mut chain = self.chain.clone();
        chain.insert(pos, f);
        Some(FlagOfFlats { chain })
    }

    /// Layers `F_j ∖ F_{j-1}` for `j = 1..=d`.
    pub fn layers(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.chain.windows(2).map(|w| w[1].set().difference(w[0].set()))
    }

    /// The flat of `self` missing from `face`, when `face` is a facet of `self`.
    pub fn new_flat_over(&self, face: &FlagOfFlats) -> Option<Flat> {
        if self.dim() != face.dim() + 1 || !face.is_face_of(self) {
            return None;
        }
        self.chain.iter().find(|f| !face.contains_flat(f.set())).copied()
    }

    fn sort_key(&self) -> (usize, ConeType, Vec<ElementSet>) {
        (self.dim(), self.cone_type(), self.sets())
    }
}

impl Ord for FlagOfFlats {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for FlagOfFlats {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FlagOfFlats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Flag").field(&self.sets()).finish()
    }
}

/// Layer values `v_1, …, v_d` of `x` on the flag, if `x` is constant on every layer.
fn layer_values(flag: &FlagOfFlats, x: &RationalVector) -> Option<Vec<BigRational>> {
    flag.layers()
        .map(|layer| {
            let mut it = layer.iter();
            let v = &x[it.next()?];
            it.all(|e| &x[e] == v).then(|| v.clone())
        })
        .collect()
}

/// Coefficients `λ_1, …, λ_d` with `x = Σ λ_j e_{F_j}`, if `x` lies in the linear span.
///
/// `λ_j = v_j - v_{j+1}` for `j < d` and `λ_d = v_d`.
pub fn span_coefficients(flag: &FlagOfFlats, x: &RationalVector) -> Result<Option<Vec<BigRational>>> {
    x.check_len(flag.flat(flag.dim()).set().len())?;
    Ok(layer_values(flag, x).map(|v| {
        let d = v.len();
        (0..d).map(|j| if j + 1 < d { &v[j] - &v[j + 1] } else { v[j].clone() }).collect()
    }))
}

/// Whether `x` lies in the cone of `flag` (nonnegative `λ_j` for `0 < j < d`).
pub fn in_cone(flag: &FlagOfFlats, x: &RationalVector) -> Result<bool> {
    Ok(cone_witness(flag, x)?.is_some())
}

/// The cone-membership certificate: `(F_j, λ_j)` for `j = 1..=d`.
pub fn cone_witness(flag: &FlagOfFlats, x: &RationalVector) -> Result<Option<Vec<(Flat, BigRational)>>> {
    let Some(lambda) = span_coefficients(flag, x)? else {
        return Ok(None);
    };
    let d = lambda.len();
    if lambda[..d - 1].iter().any(Signed::is_negative) {
        return Ok(None);
    }
    Ok(Some(flag.flats()[1..].iter().copied().zip(lambda).collect()))
}

/// Whether `x` lies in the linear span of the cone of `flag`.
pub fn in_span(flag: &FlagOfFlats, x: &RationalVector) -> Result<bool> {
    Ok(span_coefficients(flag, x)?.is_some())
}

/// A cone of `B(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub flag: FlagOfFlats,
    pub cone_type: ConeType,
    pub dim: usize,
}

impl Cone {
    fn new(flag: FlagOfFlats) -> Self {
        Cone { cone_type: flag.cone_type(), dim: flag.dim(), flag }
    }
}

pub struct BergmanFan {
    matroid: Matroid,
    cones_by_dim: Vec<Vec<Cone>>,
    counts_by_type: BTreeMap<ConeType, usize>,
    index: HashMap<Vec<ElementSet>, (usize, usize)>,
}

impl fmt::Debug for BergmanFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BergmanFan")
            .field("rank", &self.matroid.rank())
            .field("counts_by_type", &self.counts_by_type)
            .finish()
    }
}

impl BergmanFan {
    pub fn build(m: &Matroid) -> Result<Self> {
        Self::build_with_limit(m, DEFAULT_MAX_FLATS)
    }

    /// Enumerates every flag of flats; refuses when the lattice has more than `max_flats` flats.
    pub fn build_with_limit(m: &Matroid, max_flats: usize) -> Result<Self> {
        if m.has_loops() {
            return Err(Error::HasLoops);
        }
        let flats = m.flats();
        if flats.len() > max_flats {
            return Err(Error::SizeLimit { flats: flats.len(), limit: max_flats });
        }
        let above: Vec<Vec<usize>> = flats
            .iter()
            .map(|f| (0..flats.len()).filter(|&j| f.set().is_proper_subset(flats[j].set())).collect())
            .collect();
        let top = flats.len() - 1;

        fn extend(chain: &mut Vec<usize>, above: &[Vec<usize>], top: usize, out: &mut Vec<Vec<usize>>) {
            let last = *chain.last().unwrap();
            if last == top {
                out.push(chain.clone());
                return;
            }
            for &next in &above[last] {
                chain.push(next);
                extend(chain, above, top, out);
                chain.pop();
            }
        }

        let mut flags: Vec<FlagOfFlats> = above[0]
            .par_iter()
            .flat_map_iter(|&first| {
                let mut out = Vec::new();
                extend(&mut vec![0, first], &above, top, &mut out);
                out
            })
            .map(|idx| FlagOfFlats { chain: idx.into_iter().map(|i| flats[i]).collect() })
            .collect();
        flags.sort();

        let mut cones_by_dim: Vec<Vec<Cone>> = vec![Vec::new(); m.rank() + 1];
        let mut counts_by_type = BTreeMap::new();
        let mut index = HashMap::with_capacity(flags.len());
        for flag in flags {
            let cone = Cone::new(flag);
            *counts_by_type.entry(cone.cone_type.clone()).or_insert(0) += 1;
            let list = &mut cones_by_dim[cone.dim];
            index.insert(cone.flag.sets(), (cone.dim, list.len()));
            list.push(cone);
        }
        Ok(BergmanFan { matroid: m.clone(), cones_by_dim, counts_by_type, index })
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn n(&self) -> usize {
        self.matroid.n()
    }

    /// Dimension of the maximal cones, `rk M`.
    pub fn dim(&self) -> usize {
        self.matroid.rank()
    }

    /// Cones of dimension `dim` in canonical order.
    pub fn cones(&self, dim: usize) -> &[Cone] {
        self.cones_by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn all_cones(&self) -> impl Iterator<Item = &Cone> {
        self.cones_by_dim.iter().flatten()
    }

    pub fn num_cones(&self) -> usize {
        self.cones_by_dim.iter().map(Vec::len).sum()
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        self.cones(self.dim())
    }

    pub fn counts_by_type(&self) -> &BTreeMap<ConeType, usize> {
        &self.counts_by_type
    }

    pub fn contains_flag(&self, flag: &FlagOfFlats) -> bool {
        self.index.contains_key(&flag.sets())
    }

    pub fn cone_of(&self, flag: &FlagOfFlats) -> Option<&Cone> {
        self.index.get(&flag.sets()).map(|&(d, i)| &self.cones_by_dim[d][i])
    }

    /// Cones one dimension higher having `flag` as a face.
    pub fn cofaces(&self, flag: &FlagOfFlats) -> Vec<&Cone> {
        self.cones(flag.dim() + 1).iter().filter(|c| flag.is_face_of(&c.flag)).collect()
    }

    /// The unique cone containing `x` in its relative interior, or `None` if `x ∉ |B(M)|`.
    ///
    /// With `t_1 > … > t_s` the distinct coordinates of `x`, the candidate flag is
    /// `∅ ⊊ {x ≥ t_1} ⊊ … ⊊ {x ≥ t_s} = E`; `x` is in the fan iff every level set is a flat.
    pub fn classify_point(&self, x: &RationalVector) -> Result<Option<FlagOfFlats>> {
        x.check_len(self.n())?;
        let mut values: Vec<&BigRational> = x.coords().iter().collect();
        values.sort_unstable_by(|a, b| b.cmp(a));
        values.dedup();
        let mut chain = vec![self.matroid.flat(ElementSet::empty())?];
        for t in values {
            let level: ElementSet = (0..self.n()).filter(|&e| &x[e] >= t).collect();
            match self.matroid.flat(level) {
                Ok(f) => chain.push(f),
                Err(_) => return Ok(None),
            }
        }
        Ok(Some(FlagOfFlats { chain }))
    }

    /// Whether `x ∈ |B(M)|`, decided by testing every maximal cone.
    pub fn contains_point(&self, x: &RationalVector) -> Result<bool> {
        x.check_len(self.n())?;
        for cone in self.maximal_cones() {
            if in_cone(&cone.flag, x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether `e_f ∈ |B(M)|`; agrees with `f` being a flat.
    pub fn member_of_support(&self, f: ElementSet) -> Result<bool> {
        if !f.is_subset(self.matroid.full_set()) {
            return Err(Error::OutOfGround(f));
        }
        self.contains_point(&RationalVector::indicator(f, self.n()))
    }
}

/// `e_F` for a flat.
pub fn indicator(f: &Flat, n: usize) -> RationalVector {
    RationalVector::indicator(f.set(), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn set(elems: &[usize]) -> ElementSet {
        elems.iter().copied().collect()
    }

    fn flag(m: &Matroid, inner: &[&[usize]]) -> FlagOfFlats {
        let sets: Vec<ElementSet> = inner.iter().map(|s| set(s)).collect();
        FlagOfFlats::from_intermediate(m, &sets).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn counts(fan: &BergmanFan) -> Vec<(String, usize)> {
        fan.counts_by_type().iter().map(|(t, &c)| (t.to_string(), c)).collect()
    }

    #[test]
    fn u34_cone_counts() {
        let fan = BergmanFan::build(&Matroid::uniform(3, 4).unwrap()).unwrap();
        assert_eq!(
            counts(&fan),
            vec![
                ("(0,3)".to_string(), 1),
                ("(0,1,3)".to_string(), 4),
                ("(0,2,3)".to_string(), 6),
                ("(0,1,2,3)".to_string(), 12)
            ]
        );
        assert_eq!(fan.maximal_cones().len(), 12);
        assert_eq!(fan.num_cones(), 23);
    }

    #[test]
    fn small_fans() {
        let fan = BergmanFan::build(&Matroid::uniform(1, 2).unwrap()).unwrap();
        assert_eq!(counts(&fan), vec![("(0,1)".to_string(), 1)]);
        let fan = BergmanFan::build(&Matroid::uniform(2, 3).unwrap()).unwrap();
        assert_eq!(counts(&fan), vec![("(0,2)".to_string(), 1), ("(0,1,2)".to_string(), 3)]);
    }

    #[test]
    fn loops_and_size_guard() {
        assert_eq!(BergmanFan::build(&Matroid::uniform(0, 2).unwrap()).unwrap_err(), Error::HasLoops);
        let m = Matroid::uniform(3, 4).unwrap();
        assert_eq!(BergmanFan::build_with_limit(&m, 5).unwrap_err(), Error::SizeLimit { flats: 12, limit: 5 });
    }

    #[test]
    fn flag_validation() {
        let m = Matroid::uniform(3, 4).unwrap();
        assert!(FlagOfFlats::new(&m, &[set(&[0]), m.full_set()]).is_err());
        assert!(FlagOfFlats::from_intermediate(&m, &[set(&[0, 1]), set(&[0])]).is_err());
        assert!(matches!(FlagOfFlats::from_intermediate(&m, &[set(&[0, 1, 2])]), Err(Error::NotAFlat(_))));
        let f = flag(&m, &[&[0], &[0, 1]]);
        assert_eq!(f.dim(), 3);
        assert_eq!(f.cone_type().to_string(), "(0,1,2,3)");
    }

    #[test]
    fn face_relation() {
        let m = Matroid::uniform(3, 4).unwrap();
        let a = flag(&m, &[&[0]]);
        let b = flag(&m, &[&[0], &[0, 1]]);
        assert!(a.is_face_of(&b));
        assert!(b.is_face_of(&b));
        assert!(!flag(&m, &[&[1]]).is_face_of(&b));
    }

    #[test]
    fn intersection_rule() {
        let m = Matroid::uniform(3, 4).unwrap();
        let a = flag(&m, &[&[0], &[0, 1]]);
        assert_eq!(a.intersect(&flag(&m, &[&[0], &[0, 2]])), flag(&m, &[&[0]]));
        assert_eq!(a.intersect(&a), a);
        assert_eq!(a.intersect(&flag(&m, &[&[2], &[2, 3]])), flag(&m, &[]));
    }

    #[test]
    fn classify_examples() {
        let fan = BergmanFan::build(&Matroid::uniform(3, 4).unwrap()).unwrap();
        let m = fan.matroid();
        let got = fan.classify_point(&RationalVector::from_integers([2, 1, 0, 0])).unwrap();
        assert_eq!(got, Some(flag(m, &[&[0], &[0, 1]])));
        let got = fan.classify_point(&RationalVector::from_integers([5, 5, 5, 5])).unwrap();
        assert_eq!(got, Some(flag(m, &[])));
        let fan23 = BergmanFan::build(&Matroid::uniform(2, 3).unwrap()).unwrap();
        assert_eq!(fan23.classify_point(&RationalVector::from_integers([1, 1, 0])).unwrap(), None);
        assert!(fan.classify_point(&RationalVector::zeros(3)).is_err());
    }

    #[test]
    fn in_cone_examples() {
        let m = Matroid::uniform(3, 4).unwrap();
        let f = flag(&m, &[&[0]]);
        let x = RationalVector::from_integers([3, 1, 1, 1]);
        assert!(in_cone(&f, &x).unwrap());
        let w = cone_witness(&f, &x).unwrap().unwrap();
        assert_eq!(w.iter().map(|(_, l)| l.clone()).collect::<Vec<_>>(), vec![q(2), q(1)]);
        assert!(in_cone(&f, &RationalVector::from_integers([1, 1, 1, 1])).unwrap());
        assert!(!in_cone(&f, &RationalVector::from_integers([0, 1, 1, 1])).unwrap());
        // the lineality coefficient is unconstrained
        assert!(in_cone(&f, &RationalVector::from_integers([-1, -3, -3, -3])).unwrap());
    }

    #[test]
    fn in_span_examples() {
        let m = Matroid::uniform(3, 4).unwrap();
        let f = flag(&m, &[&[0]]);
        assert!(in_span(&f, &RationalVector::from_integers([-7, 2, 2, 2])).unwrap());
        assert!(in_span(&f, &RationalVector::zeros(4)).unwrap());
        assert!(!in_span(&flag(&m, &[]), &RationalVector::from_integers([1, 0, 0, 0])).unwrap());
        assert!(in_span(&f, &RationalVector::zeros(3)).is_err());
    }

    #[test]
    fn support_membership_examples() {
        let fan = BergmanFan::build(&Matroid::uniform(3, 4).unwrap()).unwrap();
        assert!(fan.member_of_support(set(&[0, 1])).unwrap());
        assert!(fan.member_of_support(set(&[0, 1, 2, 3])).unwrap());
        let fan23 = BergmanFan::build(&Matroid::uniform(2, 3).unwrap()).unwrap();
        assert!(!fan23.member_of_support(set(&[0, 1])).unwrap());
    }

    #[test]
    fn tropical_combination_stays_in_fan() {
        let fan = BergmanFan::build(&Matroid::uniform(3, 4).unwrap()).unwrap();
        let x = RationalVector::from_integers([2, 1, 0, 0]);
        let y = RationalVector::from_integers([0, 0, 2, 1]);
        let z = crate::vector::tropical_combine(&BigRational::zero(), &x, &BigRational::zero(), &y).unwrap();
        assert_eq!(z, RationalVector::zeros(4));
        assert!(fan.classify_point(&z).unwrap().is_some());
    }

    #[test]
    fn insert_and_new_flat() {
        let m = Matroid::uniform(3, 4).unwrap();
        let tau = flag(&m, &[&[0]]);
        let f01 = m.flat(set(&[0, 1])).unwrap();
        let sigma = tau.insert(f01).unwrap();
        assert_eq!(sigma, flag(&m, &[&[0], &[0, 1]]));
        assert_eq!(sigma.new_flat_over(&tau), Some(f01));
        assert!(tau.insert(m.flat(set(&[1, 2])).unwrap()).is_none());
    }
}
