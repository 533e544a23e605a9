//! Finite matroids given by an explicit list of bases.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Above this many bases the exchange axiom is checked on a random sample of pairs.
pub const EXHAUSTIVE_EXCHANGE_LIMIT: usize = 5000;
const SAMPLED_EXCHANGE_PAIRS: usize = 100_000;

/// Ground set `E`: external labels mapped bijectively onto `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyGround);
        }
        if labels.len() > ElementSet::MAX_ELEMENTS {
            return Err(Error::TooManyElements(labels.len()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(GroundSet { labels, index })
    }

    /// Ground set labelled `"0"`, …, `"n-1"`.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((0..n).map(|e| e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn full(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: usize) -> &str {
        &self.labels[e]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn set_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<ElementSet> {
        labels.iter().map(|l| self.index_of(l.as_ref())).collect()
    }

    pub fn labels_of(&self, set: ElementSet) -> Vec<String> {
        set.iter().map(|e| self.labels[e].clone()).collect()
    }

    /// `{a,b}` style rendering with the external labels.
    pub fn format_set(&self, set: ElementSet) -> String {
        format!("{{{}}}", self.labels_of(set).join(","))
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.labels).finish()
    }
}

/// A closed set together with its rank. Orders by `(rank, encoding)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    rank: usize,
    set: ElementSet,
}

impl Flat {
    pub fn set(&self) -> ElementSet {
        self.set
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl fmt::Debug for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.set, self.rank)
    }
}

/// How thoroughly the basis-exchange axiom was verified at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExchangeCheck {
    Exhaustive,
    /// Too many bases for an exhaustive check; this many random pairs passed.
    Sampled {
        pairs: usize,
    },
}

#[derive(Clone)]
struct Lattice {
    flats: Vec<Flat>,
    index: HashMap<ElementSet, usize>,
    up: Vec<Vec<usize>>,
}

#[derive(Clone)]
pub struct Matroid {
    ground: GroundSet,
    bases: Vec<ElementSet>,
    rank: usize,
    exchange: ExchangeCheck,
    lattice: OnceLock<Lattice>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("ground", &self.ground)
            .field("rank", &self.rank)
            .field("bases", &self.bases)
            .finish()
    }
}

impl Matroid {
    /// Validates the bases (equal size, exchange axiom) and builds the matroid.
    pub fn from_bases(ground: GroundSet, bases: impl IntoIterator<Item = ElementSet>) -> Result<Self> {
        let full = ground.full();
        let bases: Vec<ElementSet> = bases.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let first = *bases.first().ok_or(Error::EmptyBases)?;
        let rank = first.len();
        for &b in &bases {
            if !b.is_subset(full) {
                return Err(Error::OutOfGround(b));
            }
            if b.len() != rank {
                return Err(Error::UnequalCardinality { expected: rank, found: b.len() });
            }
        }
        let exchange = check_exchange(&bases)?;
        Ok(Matroid { ground, bases, rank, exchange, lattice: OnceLock::new() })
    }

    /// The uniform matroid `U_{r,n}` on `0..n`.
    pub fn uniform(r: i64, n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::EmptyGround);
        }
        if r < 0 || r > n {
            return Err(Error::InvalidRank { r, n });
        }
        let ground = GroundSet::indexed(n as usize)?;
        Self::uniform_on(ground, r as usize)
    }

    /// `U_{r,|E|}` on an existing ground set.
    pub fn uniform_on(ground: GroundSet, r: usize) -> Result<Self> {
        if r > ground.len() {
            return Err(Error::InvalidRank { r: r as i64, n: ground.len() as i64 });
        }
        let bases = ElementSet::k_subsets(ground.len(), r);
        Self::from_bases(ground, bases)
    }

    /// Cycle matroid of a multigraph; element `j` is edge `j`. Loops become rank-0 elements.
    pub fn graphic(edges: &[(usize, usize)]) -> Result<Self> {
        let ground = GroundSet::indexed(edges.len())?;
        Self::graphic_on(ground, edges)
    }

    pub fn graphic_on(ground: GroundSet, edges: &[(usize, usize)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyGround);
        }
        if ground.len() != edges.len() {
            return Err(Error::InconsistentDimensions(format!("{} labels for {} edges", ground.len(), edges.len())));
        }
        let vertices = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0) + 1;
        let all = ElementSet::full(edges.len());
        let rank = forest_rank(edges, vertices, all);
        let bases = ElementSet::k_subsets(edges.len(), rank).filter(|&s| forest_rank(edges, vertices, s) == rank);
        Self::from_bases(ground, bases)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn full_set(&self) -> ElementSet {
        self.ground.full()
    }

    pub fn bases(&self) -> &[ElementSet] {
        &self.bases
    }

    /// `rk M`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn exchange_check(&self) -> ExchangeCheck {
        self.exchange
    }

    fn check_ground(&self, s: ElementSet) -> Result<()> {
        if s.is_subset(self.full_set()) {
            Ok(())
        } else {
            Err(Error::OutOfGround(s))
        }
    }

    fn rank_unchecked(&self, s: ElementSet) -> usize {
        let mut best = 0;
        for b in &self.bases {
            best = best.max(b.intersection(s).len());
            if best == self.rank {
                break;
            }
        }
        best
    }

    /// `max_B |B ∩ s|`.
    pub fn rank_of(&self, s: ElementSet) -> Result<usize> {
        self.check_ground(s)?;
        Ok(self.rank_unchecked(s))
    }

    fn closure_unchecked(&self, s: ElementSet) -> Flat {
        let rank = self.rank_unchecked(s);
        let set = self
            .full_set()
            .difference(s)
            .iter()
            .filter(|&e| self.rank_unchecked(s.with(e)) == rank)
            .fold(s, ElementSet::with);
        Flat { rank, set }
    }

    /// Smallest flat containing `s`.
    pub fn closure(&self, s: ElementSet) -> Result<Flat> {
        self.check_ground(s)?;
        Ok(self.closure_unchecked(s))
    }

    pub fn is_flat(&self, s: ElementSet) -> bool {
        s.is_subset(self.full_set()) && self.closure_unchecked(s).set == s
    }

    /// Looks `s` up as a flat, with its rank.
    pub fn flat(&self, s: ElementSet) -> Result<Flat> {
        self.check_ground(s)?;
        let lattice = self.lattice();
        lattice.index.get(&s).map(|&i| lattice.flats[i]).ok_or(Error::NotAFlat(s))
    }

    /// The minimal flat `cl(∅)` (the set of loops).
    pub fn bottom(&self) -> Flat {
        self.lattice().flats[0]
    }

    pub fn top(&self) -> Flat {
        Flat { rank: self.rank, set: self.full_set() }
    }

    pub fn has_loops(&self) -> bool {
        !self.bottom().set.is_empty()
    }

    fn lattice(&self) -> &Lattice {
        self.lattice.get_or_init(|| {
            let bottom = self.closure_unchecked(ElementSet::empty());
            let mut seen = BTreeSet::from([bottom]);
            let mut frontier = vec![bottom];
            let mut covers: HashMap<ElementSet, BTreeSet<Flat>> = HashMap::new();
            while let Some(f) = frontier.pop() {
                let ups: BTreeSet<Flat> =
                    self.full_set().difference(f.set).iter().map(|e| self.closure_unchecked(f.set.with(e))).collect();
                for &g in &ups {
                    if seen.insert(g) {
                        frontier.push(g);
                    }
                }
                covers.insert(f.set, ups);
            }
            let flats: Vec<Flat> = seen.into_iter().collect();
            let index: HashMap<ElementSet, usize> = flats.iter().enumerate().map(|(i, f)| (f.set, i)).collect();
            let up = flats.iter().map(|f| covers[&f.set].iter().map(|g| index[&g.set]).collect()).collect();
            Lattice { flats, index, up }
        })
    }

    /// All flats, sorted by `(rank, encoding)`.
    pub fn flats(&self) -> &[Flat] {
        &self.lattice().flats
    }

    /// Flats covering `f` (rank one higher), in sorted order.
    pub fn covers_of(&self, f: &Flat) -> Result<Vec<Flat>> {
        let lattice = self.lattice();
        let &i = lattice.index.get(&f.set).ok_or(Error::NotAFlat(f.set))?;
        Ok(lattice.up[i].iter().map(|&j| lattice.flats[j]).collect())
    }

    /// All `F'` with `f ⋖ F' ≤ g`.
    pub fn covers_within(&self, f: &Flat, g: &Flat) -> Result<Vec<Flat>> {
        self.flat(g.set)?;
        if !f.set.is_subset(g.set) {
            return Err(Error::NotNested { lower: f.set, upper: g.set });
        }
        Ok(self.covers_of(f)?.into_iter().filter(|c| c.set.is_subset(g.set)).collect())
    }

    /// `M|_f`: the matroid on the elements of `f` whose bases are the maximal `B ∩ f`.
    pub fn restriction(&self, f: &Flat) -> Result<Matroid> {
        let f = self.flat(f.set)?;
        let elements: Vec<usize> = f.set.iter().collect();
        let ground = GroundSet::new(elements.iter().map(|&e| self.ground.label(e).to_string()))?;
        let relabel = |s: ElementSet| -> ElementSet {
            elements.iter().enumerate().filter(|(_, &e)| s.contains(e)).map(|(i, _)| i).collect()
        };
        let bases: Vec<ElementSet> =
            self.bases.iter().map(|b| b.intersection(f.set)).filter(|b| b.len() == f.rank).map(relabel).collect();
        Matroid::from_bases(ground, bases)
    }

    /// Whether the sets `F' ∖ f` over the covers `f ⋖ F' ≤ g` partition `g ∖ f`.
    pub fn flat_partition_check(&self, f: &Flat, g: &Flat) -> Result<bool> {
        let covers = self.covers_within(f, g)?;
        let mut seen = ElementSet::empty();
        for c in &covers {
            let part = c.set.difference(f.set);
            if !part.is_disjoint(seen) {
                return Ok(false);
            }
            seen = seen.union(part);
        }
        Ok(seen == g.set.difference(f.set))
    }

    /// The same matroid with ground element `e` renamed to `perm[e]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Matroid> {
        let n = self.n();
        if perm.len() != n || perm.iter().collect::<HashSet<_>>().len() != n || perm.iter().any(|&p| p >= n) {
            return Err(Error::InconsistentDimensions("not a permutation of the ground set".into()));
        }
        let mut labels = vec![String::new(); n];
        for e in 0..n {
            labels[perm[e]] = self.ground.label(e).to_string();
        }
        let bases = self.bases.iter().map(|b| b.iter().map(|e| perm[e]).collect::<ElementSet>());
        Matroid::from_bases(GroundSet::new(labels)?, bases)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Size of a spanning forest of the edges in `subset`.
fn forest_rank(edges: &[(usize, usize)], vertices: usize, subset: ElementSet) -> usize {
    let mut parent: Vec<usize> = (0..vertices).collect();
    let mut rank = 0;
    for j in subset {
        let (u, v) = edges[j];
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            rank += 1;
        }
    }
    rank
}

fn check_exchange(bases: &[ElementSet]) -> Result<ExchangeCheck> {
    let lookup: HashSet<ElementSet> = bases.iter().copied().collect();
    let check_pair = |b1: ElementSet, b2: ElementSet| -> Result<()> {
        let candidates = b2.difference(b1);
        for x in b1.difference(b2) {
            let rest = b1.without(x);
            if !candidates.iter().any(|y| lookup.contains(&rest.with(y))) {
                return Err(Error::ExchangeAxiomViolated { first: b1, second: b2, element: x });
            }
        }
        Ok(())
    };
    if bases.len() <= EXHAUSTIVE_EXCHANGE_LIMIT {
        for &b1 in bases {
            for &b2 in bases {
                if b1 != b2 {
                    check_pair(b1, b2)?;
                }
            }
        }
        Ok(ExchangeCheck::Exhaustive)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..SAMPLED_EXCHANGE_PAIRS {
            let b1 = bases[rng.gen_range(0..bases.len())];
            let b2 = bases[rng.gen_range(0..bases.len())];
            check_pair(b1, b2)?;
        }
        Ok(ExchangeCheck::Sampled { pairs: SAMPLED_EXCHANGE_PAIRS })
    }
}
