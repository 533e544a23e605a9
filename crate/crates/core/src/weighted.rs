//! Weighted balancing on the `k`-skeleton of a Bergman fan.
//!
//! A weight function `μ` on the `k`-dimensional cones is balanced at a
//! `(k-1)`-dimensional cone `τ` when `Σ_{σ ⊃ τ} μ_σ e_{F_new(σ,τ)}` lies in the
//! linear span of `τ`, where `F_new(σ,τ)` is the one flat of `σ` not in `τ`.
//! Its indicator vector is a primitive vector of `σ` modulo `τ`; any other
//! representative differs by an element of `span(τ)` and gives the same answer.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::balancing::balancing_lhs;
use crate::combination::FlatCombination;
use crate::error::{Error, Result};
use crate::fan::{in_span, BergmanFan, FlagOfFlats};
use crate::linalg::{to_rationals, IntMatrix};
use crate::matroid::{Flat, Matroid};
use crate::set::ElementSet;
use crate::vector::RationalVector;

/// A `(k-1)`-cone of the skeleton with its cofaces among the cells.
#[derive(Clone, Debug)]
pub struct BoundaryCone {
    pub face: FlagOfFlats,
    /// `(cell index, new flat)` for every cell containing `face`.
    pub cofaces: Vec<(usize, Flat)>,
}

#[derive(Clone, Debug)]
pub struct Skeleton<'a> {
    fan: &'a BergmanFan,
    k: usize,
    cells: Vec<FlagOfFlats>,
    boundary: Vec<BoundaryCone>,
}

/// The `k`-dimensional cones of `fan` and their `(k-1)`-dimensional faces, `1 ≤ k ≤ rk M`.
pub fn skeleton(fan: &BergmanFan, k: usize) -> Result<Skeleton<'_>> {
    if k < 1 || k > fan.dim() {
        return Err(Error::KOutOfRange { k, min: 1, max: fan.dim() });
    }
    let cells: Vec<FlagOfFlats> = fan.cones(k).iter().map(|c| c.flag.clone()).collect();
    let index: HashMap<Vec<ElementSet>, usize> = cells.iter().enumerate().map(|(j, c)| (c.sets(), j)).collect();
    let boundary = fan
        .cones(k - 1)
        .iter()
        .filter(|_| k > 1)
        .map(|tau| {
            let cofaces = fan
                .cofaces(&tau.flag)
                .into_iter()
                .map(|sigma| {
                    let new = sigma.flag.new_flat_over(&tau.flag).expect("coface has one extra flat");
                    (index[&sigma.flag.sets()], new)
                })
                .collect();
            BoundaryCone { face: tau.flag.clone(), cofaces }
        })
        .collect();
    Ok(Skeleton { fan, k, cells, boundary })
}

impl<'a> Skeleton<'a> {
    pub fn fan(&self) -> &'a BergmanFan {
        self.fan
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cells(&self) -> &[FlagOfFlats] {
        &self.cells
    }

    pub fn boundary(&self) -> &[BoundaryCone] {
        &self.boundary
    }

    fn cell_index(&self, flag: &FlagOfFlats) -> Option<usize> {
        self.cells.binary_search(flag).ok()
    }

    /// `Σ_{σ ⊃ τ} μ_σ e_{F_new(σ,τ)}` for the boundary cone at position `b`.
    pub fn weighted_sum(&self, values: &[BigRational], b: usize) -> RationalVector {
        let mut v = RationalVector::zeros(self.fan.n());
        for (cell, new) in &self.boundary[b].cofaces {
            v.add_indicator(new.set(), &values[*cell]);
        }
        v
    }

    /// The same sum kept as a formal combination of flat symbols.
    pub fn weighted_relation(&self, values: &[BigRational], b: usize) -> FlatCombination {
        let mut c = FlatCombination::new();
        for (cell, new) in &self.boundary[b].cofaces {
            c.add(new.set(), &values[*cell]);
        }
        c
    }
}

/// Exact weights on the cells of one skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunction {
    pub k: usize,
    pub weights: BTreeMap<FlagOfFlats, BigRational>,
}

impl WeightFunction {
    pub fn constant(s: &Skeleton<'_>, c: BigRational) -> Self {
        Self::from_values(s, vec![c; s.cells.len()])
    }

    /// Weights listed in the skeleton's cell order.
    pub fn from_values(s: &Skeleton<'_>, values: Vec<BigRational>) -> Self {
        assert_eq!(values.len(), s.cells.len());
        WeightFunction { k: s.k, weights: s.cells.iter().cloned().zip(values).collect() }
    }

    /// Weights in the skeleton's cell order; the domain must be exactly the cell set.
    pub fn values_for(&self, s: &Skeleton<'_>) -> Result<Vec<BigRational>> {
        if self.k != s.k {
            return Err(Error::DomainMismatch(format!("weights are for k = {}, skeleton has k = {}", self.k, s.k)));
        }
        if self.weights.len() != s.cells.len() {
            return Err(Error::DomainMismatch(format!("{} weights for {} cells", self.weights.len(), s.cells.len())));
        }
        let mut values = vec![BigRational::zero(); s.cells.len()];
        for (flag, w) in &self.weights {
            let j = s.cell_index(flag).ok_or_else(|| Error::DomainMismatch(format!("{flag:?} is not a cell")))?;
            values[j] = w.clone();
        }
        Ok(values)
    }
}

#[derive(Clone, Debug)]
pub struct BoundaryCheck {
    pub face: FlagOfFlats,
    pub sum: RationalVector,
    pub balanced: bool,
}

#[derive(Clone, Debug)]
pub struct WeightCheck {
    pub checks: Vec<BoundaryCheck>,
}

impl WeightCheck {
    pub fn all_balanced(&self) -> bool {
        self.checks.iter().all(|c| c.balanced)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundaryCheck> {
        self.checks.iter().filter(|c| !c.balanced)
    }
}

pub fn check_weighted(s: &Skeleton<'_>, w: &WeightFunction) -> Result<WeightCheck> {
    let values = w.values_for(s)?;
    let checks = (0..s.boundary.len())
        .map(|b| {
            let sum = s.weighted_sum(&values, b);
            let face = s.boundary[b].face.clone();
            Ok(BoundaryCheck { balanced: in_span(&face, &sum)?, face, sum })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightCheck { checks })
}

/// Basis of all balanced weight functions on the skeleton.
///
/// `x ∈ span(τ)` iff `x` is constant on every layer of `τ`, so each boundary cone
/// contributes the equations `x_a - x_b = 0` for consecutive elements `a < b` of a layer.
pub fn solve_weights(s: &Skeleton<'_>) -> Vec<WeightFunction> {
    let mut system = IntMatrix::new(s.cells.len());
    for bc in &s.boundary {
        for layer in bc.face.layers() {
            let elems: Vec<usize> = layer.iter().collect();
            for pair in elems.windows(2) {
                let mut row = vec![BigInt::zero(); s.cells.len()];
                for (cell, new) in &bc.cofaces {
                    let a = new.set().contains(pair[0]) as i64;
                    let b = new.set().contains(pair[1]) as i64;
                    row[*cell] += a - b;
                }
                if row.iter().any(|x| !x.is_zero()) {
                    system.push_row(row);
                }
            }
        }
    }
    system.nullspace().iter().map(|v| WeightFunction::from_values(s, to_rationals(v))).collect()
}

/// One generating relation: the `(i,k)` relation at `flag`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RelationTag {
    pub flag: FlagOfFlats,
    pub i: usize,
    pub k: usize,
}

/// Every admissible `(i,k)` at `flag`.
pub fn generators_at(flag: &FlagOfFlats) -> Vec<RelationTag> {
    let ty = flag.cone_type();
    (0..flag.dim())
        .flat_map(|i| (1..=ty.gap(i)).map(move |k| (i, k)))
        .map(|(i, k)| RelationTag { flag: flag.clone(), i, k })
        .collect()
}

/// Symbolic balancing relations as rows over the flat symbols of a matroid.
#[derive(Clone, Debug)]
pub struct RelationMatrix {
    pub symbols: Vec<ElementSet>,
    pub rows: Vec<Vec<BigRational>>,
    pub provenance: Vec<RelationTag>,
}

impl RelationMatrix {
    pub fn build(m: &Matroid, generators: &[RelationTag]) -> Result<Self> {
        let symbols: Vec<ElementSet> = m.flats().iter().map(Flat::set).collect();
        let rows = generators
            .iter()
            .map(|g| {
                let sym = balancing_lhs(m, &g.flag, g.i, g.k)?.symbolic();
                Ok(symbols.iter().map(|&s| sym.coefficient(s)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RelationMatrix { symbols, rows, provenance: generators.to_vec() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanMembership {
    pub member: bool,
    /// One coefficient per generator, when `member`.
    pub coefficients: Option<Vec<BigRational>>,
    /// Coefficients on the anchor's flat symbols, which span the anchor cone.
    pub anchor_coefficients: Option<Vec<(ElementSet, BigRational)>>,
}

/// Decides whether `target` is a rational combination of the generator relations,
/// modulo the symbols `[e_F]` of the anchor's flats.
pub fn relation_span_test(
    m: &Matroid,
    target: &FlatCombination,
    anchor: &FlagOfFlats,
    generators: &[RelationTag],
) -> Result<SpanMembership> {
    let matrix = RelationMatrix::build(m, generators)?;
    let position: HashMap<ElementSet, usize> = matrix.symbols.iter().enumerate().map(|(j, &s)| (s, j)).collect();
    for (s, _) in target.iter() {
        if !position.contains_key(&s) {
            return Err(Error::InconsistentDimensions(format!("target symbol {s:?} is not a flat")));
        }
    }
    let anchors = anchor.sets();
    for s in &anchors {
        if !position.contains_key(s) {
            return Err(Error::InconsistentDimensions(format!("anchor flat {s:?} is not a flat")));
        }
    }
    let unknowns = generators.len() + anchors.len();
    let mut system = IntMatrix::new(unknowns);
    let mut rhs = Vec::with_capacity(matrix.symbols.len());
    for (j, &sym) in matrix.symbols.iter().enumerate() {
        let mut row: Vec<BigRational> = matrix.rows.iter().map(|r| r[j].clone()).collect();
        row.extend(anchors.iter().map(|&a| if a == sym { BigRational::one() } else { BigRational::zero() }));
        let scale = lcm_of_denominators(&row);
        system.push_row(row.iter().map(|x| (x * &scale).to_integer()).collect());
        rhs.push(target.coefficient(sym) * &scale);
    }
    Ok(match system.solve(&rhs) {
        Some(x) => {
            let (gens, anch) = x.split_at(generators.len());
            SpanMembership {
                member: true,
                coefficients: Some(gens.to_vec()),
                anchor_coefficients: Some(anchors.iter().copied().zip(anch.iter().cloned()).collect()),
            }
        }
        None => SpanMembership { member: false, coefficients: None, anchor_coefficients: None },
    })
}

fn lcm_of_denominators(row: &[BigRational]) -> BigRational {
    use num_integer::Integer;
    BigRational::from_integer(row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom())))
}

/// Basis of the balanced weight functions whose boundary relations are all
/// combinations of the `(i,k)` relations at the boundary cone (modulo its span).
///
/// Every such weight function is balanced, since each relation evaluates to zero.
pub fn certified_weights(s: &Skeleton<'_>) -> Result<Vec<WeightFunction>> {
    let m = s.fan.matroid();
    let mut system = IntMatrix::new(s.cells.len());
    for bc in &s.boundary {
        let generators = generators_at(&bc.face);
        let mut spanning: Vec<FlatCombination> =
            generators.iter().map(|g| Ok(balancing_lhs(m, &g.flag, g.i, g.k)?.symbolic())).collect::<Result<_>>()?;
        spanning.extend(bc.face.sets().into_iter().map(FlatCombination::symbol));
        let symbols: Vec<ElementSet> = spanning
            .iter()
            .flat_map(|c| c.iter().map(|(s, _)| s))
            .chain(bc.cofaces.iter().map(|(_, f)| f.set()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut w = IntMatrix::new(symbols.len());
        for c in &spanning {
            w.push_rational_row(&symbols.iter().map(|&s| c.coefficient(s)).collect::<Vec<_>>());
        }
        // annihilator of the relation space, pulled back along μ ↦ Σ μ_σ [e_{F_new}]
        for p in w.nullspace() {
            let mut row = vec![BigInt::zero(); s.cells.len()];
            for (cell, new) in &bc.cofaces {
                let j = symbols.binary_search(&new.set()).expect("coface symbol listed");
                row[*cell] += &p[j];
            }
            if row.iter().any(|x| !x.is_zero()) {
                system.push_row(row);
            }
        }
    }
    Ok(system.nullspace().iter().map(|v| WeightFunction::from_values(s, to_rationals(v))).collect())
}

/// Whether every weight function in `ws` lies in the span of `basis`.
pub fn weights_in_span(s: &Skeleton<'_>, basis: &[WeightFunction], ws: &[WeightFunction]) -> Result<bool> {
    let mut m = IntMatrix::new(s.cells.len());
    for b in basis {
        m.push_rational_row(&b.values_for(s)?);
    }
    let r = m.rank();
    for w in ws {
        m.push_rational_row(&w.values_for(s)?);
    }
    Ok(m.rank() == r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> BigRational {
        BigRational::one()
    }

    fn set(elems: &[usize]) -> ElementSet {
        elems.iter().copied().collect()
    }

    fn u34() -> BergmanFan {
        BergmanFan::build(&Matroid::uniform(3, 4).unwrap()).unwrap()
    }

    #[test]
    fn skeleton_shapes() {
        let fan = u34();
        let s = skeleton(&fan, 3).unwrap();
        assert_eq!((s.cells().len(), s.boundary().len()), (12, 10));
        let s = skeleton(&fan, 1).unwrap();
        assert_eq!((s.cells().len(), s.boundary().len()), (1, 0));
        assert!(skeleton(&fan, 0).is_err());
        assert!(skeleton(&fan, 4).is_err());
        let fan23 = BergmanFan::build(&Matroid::uniform(2, 3).unwrap()).unwrap();
        let s = skeleton(&fan23, 2).unwrap();
        assert_eq!((s.cells().len(), s.boundary().len()), (3, 1));
        assert_eq!(s.boundary()[0].cofaces.len(), 3);
    }

    #[test]
    fn constant_and_zero_weights_balance() {
        let fan = u34();
        let s = skeleton(&fan, 3).unwrap();
        let report = check_weighted(&s, &WeightFunction::constant(&s, one())).unwrap();
        assert_eq!(report.checks.len(), 10);
        assert!(report.all_balanced());
        assert!(check_weighted(&s, &WeightFunction::constant(&s, BigRational::zero())).unwrap().all_balanced());
    }

    #[test]
    fn single_cell_weight_fails_at_its_facets() {
        let fan = u34();
        let s = skeleton(&fan, 3).unwrap();
        let mut values = vec![BigRational::zero(); 12];
        values[0] = one();
        let report = check_weighted(&s, &WeightFunction::from_values(&s, values)).unwrap();
        let cell = &s.cells()[0];
        let failed: Vec<_> = report.failures().map(|c| c.face.clone()).collect();
        assert!(!failed.is_empty());
        assert!(failed.iter().all(|f| f.is_face_of(cell)));
    }

    #[test]
    fn domain_mismatch() {
        let fan = u34();
        let s3 = skeleton(&fan, 3).unwrap();
        let s2 = skeleton(&fan, 2).unwrap();
        let w = WeightFunction::constant(&s2, one());
        assert!(matches!(check_weighted(&s3, &w), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn solver_contains_all_ones() {
        let fan = u34();
        let s = skeleton(&fan, 3).unwrap();
        let basis = solve_weights(&s);
        assert!(!basis.is_empty());
        assert!(weights_in_span(&s, &basis, &[WeightFunction::constant(&s, one())]).unwrap());
        for w in &basis {
            assert!(check_weighted(&s, w).unwrap().all_balanced());
        }
        let s1 = skeleton(&fan, 1).unwrap();
        assert_eq!(solve_weights(&s1).len(), 1);
    }

    #[test]
    fn span_test_codim1_constant_weights() {
        let fan = u34();
        let m = fan.matroid();
        let s = skeleton(&fan, 3).unwrap();
        let values = vec![one(); 12];
        for (b, bc) in s.boundary().iter().enumerate() {
            let target = s.weighted_relation(&values, b);
            let ty = bc.face.cone_type();
            let i = (0..bc.face.dim()).find(|&i| ty.gap(i) == 2).unwrap();
            let gens: Vec<RelationTag> =
                (0..bc.face.dim()).map(|i| RelationTag { flag: bc.face.clone(), i, k: 1 }).collect();
            let res = relation_span_test(m, &target, &bc.face, &gens).unwrap();
            assert!(res.member);
            let coeffs = res.coefficients.unwrap();
            assert_eq!(coeffs[i], one());
        }
    }

    #[test]
    fn span_test_trivial_and_negative() {
        let fan = u34();
        let m = fan.matroid();
        let top = FlagOfFlats::from_intermediate(m, &[]).unwrap();
        let gens = generators_at(&top);
        let res = relation_span_test(m, &FlatCombination::new(), &top, &gens).unwrap();
        assert!(res.member);
        assert!(res.coefficients.unwrap().iter().all(Zero::is_zero));
        let res = relation_span_test(m, &FlatCombination::symbol(set(&[0])), &top, &gens).unwrap();
        assert!(!res.member);
        let bad = FlatCombination::symbol(set(&[0, 1, 2]));
        assert!(matches!(relation_span_test(m, &bad, &top, &gens), Err(Error::InconsistentDimensions(_))));
    }

    #[test]
    fn certified_weights_u34_top() {
        let fan = u34();
        let s = skeleton(&fan, 3).unwrap();
        let cert = certified_weights(&s).unwrap();
        assert!(weights_in_span(&s, &cert, &[WeightFunction::constant(&s, one())]).unwrap());
        let solved = solve_weights(&s);
        assert!(weights_in_span(&s, &solved, &cert).unwrap());
    }

    #[test]
    fn primitive_vector_representative_is_irrelevant() {
        let fan = u34();
        let s = skeleton(&fan, 3).unwrap();
        let values = vec![one(); 12];
        for (b, bc) in s.boundary().iter().enumerate() {
            let sum = s.weighted_sum(&values, b);
            let mut shifted = sum.clone();
            // shift by an element of span(τ)
            shifted.add_indicator(bc.face.flat(1).set(), &BigRational::from_integer(5.into()));
            shifted.add_indicator(bc.face.flat(bc.face.dim()).set(), &BigRational::from_integer((-2).into()));
            assert_eq!(in_span(&bc.face, &sum).unwrap(), in_span(&bc.face, &shifted).unwrap());
        }
    }
}
