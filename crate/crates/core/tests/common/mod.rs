//! Brute-force oracles and matroid families shared by the integration tests.
//!
//! Everything here works on raw `u32` bitmasks and `i64` vectors and only
//! touches the library to read bases, so it can stand as a second opinion.
#![allow(dead_code)]

use std::collections::BTreeSet;

use bergman::{ElementSet, GroundSet, Matroid};

pub fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|s| s.count_ones() as usize == k).collect()
}

/// A matroid given by its bases, with everything else recomputed by brute force.
#[derive(Clone, Debug)]
pub struct Oracle {
    pub n: usize,
    pub bases: Vec<u32>,
    pub rank: Vec<usize>,
}

impl Oracle {
    pub fn new(n: usize, bases: Vec<u32>) -> Self {
        let rank =
            (0u32..1 << n).map(|s| bases.iter().map(|b| (b & s).count_ones() as usize).max().unwrap_or(0)).collect();
        Oracle { n, bases, rank }
    }

    pub fn of(m: &Matroid) -> Self {
        Oracle::new(m.n(), m.bases().iter().map(|b| b.bits()).collect())
    }

    pub fn uniform(r: usize, n: usize) -> Self {
        Oracle::new(n, subsets_of_size(n, r))
    }

    /// Cycle matroid: bases are the edge sets of maximal spanning forests.
    pub fn graphic(edges: &[(usize, usize)]) -> Self {
        let n = edges.len();
        let acyclic = |s: u32| {
            let mut comp: Vec<usize> = (0..32).collect();
            for (j, &(u, v)) in edges.iter().enumerate() {
                if s & (1 << j) == 0 {
                    continue;
                }
                let (cu, cv) = (comp[u], comp[v]);
                if cu == cv {
                    return false;
                }
                for c in comp.iter_mut() {
                    if *c == cv {
                        *c = cu;
                    }
                }
            }
            true
        };
        let forests: Vec<u32> = (0u32..1 << n).filter(|&s| acyclic(s)).collect();
        let r = forests.iter().map(|s| s.count_ones()).max().unwrap();
        Oracle::new(n, forests.into_iter().filter(|s| s.count_ones() == r).collect())
    }

    pub fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn r(&self, s: u32) -> usize {
        self.rank[s as usize]
    }

    pub fn is_flat(&self, s: u32) -> bool {
        (0..self.n).all(|e| s & (1 << e) != 0 || self.r(s | 1 << e) > self.r(s))
    }

    pub fn flats(&self) -> Vec<u32> {
        (0u32..1 << self.n).filter(|&s| self.is_flat(s)).collect()
    }

    pub fn circuits(&self) -> Vec<u32> {
        (1u32..1 << self.n)
            .filter(|&s| {
                self.r(s) + 1 == s.count_ones() as usize
                    && (0..self.n).filter(|e| s & (1 << e) != 0).all(|e| self.r(s & !(1 << e)) == self.r(s))
            })
            .collect()
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|e| self.r(1 << e) == 0)
    }

    /// Flats `G` with `f ⊊ G ⊆ upper` and `r(G) = r(f) + 1`.
    fn covers_inside(&self, f: u32, upper: u32) -> Vec<u32> {
        self.flats()
            .into_iter()
            .filter(|&g| g & !upper == 0 && g & f == f && g != f && self.r(g) == self.r(f) + 1)
            .collect()
    }

    /// All chains `f = G_0 ⋖ G_1 ⋖ … ⋖ G_len` with `G_len ⊆ upper`.
    pub fn chains(&self, f: u32, upper: u32, len: usize) -> Vec<Vec<u32>> {
        let mut out = vec![vec![f]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|c| {
                    let last = *c.last().unwrap();
                    self.covers_inside(last, upper).into_iter().map(move |g| {
                        let mut d = c.clone();
                        d.push(g);
                        d
                    })
                })
                .collect();
        }
        out
    }

    /// The `(i,k)` relation at `flag` (all flats from `∅` to `E`), evaluated in `Z^n`.
    pub fn balancing(&self, flag: &[u32], i: usize, k: usize) -> Vec<i64> {
        let (lo, hi) = (flag[i], flag[i + 1]);
        let mut v = vec![0i64; self.n];
        let mut add = |set: u32, c: i64| {
            for (e, x) in v.iter_mut().enumerate() {
                if set & (1 << e) != 0 {
                    *x += c;
                }
            }
        };
        let sgn = |p: usize| if p.is_multiple_of(2) { 1 } else { -1 };
        for c in self.chains(lo, hi, k) {
            add(c[k], 1);
            add(c[k - 1], -1);
        }
        for l in 1..k {
            for c in self.chains(lo, hi, l) {
                add(hi, sgn(k - l));
                add(c[l - 1], -sgn(k - l));
            }
        }
        add(hi, sgn(k));
        add(lo, -sgn(k));
        v
    }

    /// All flags of flats from `∅` to `E`.
    pub fn flags(&self) -> Vec<Vec<u32>> {
        let flats = self.flats();
        let mut done = Vec::new();
        let mut stack = vec![vec![0u32]];
        while let Some(c) = stack.pop() {
            let last = *c.last().unwrap();
            if last == self.full() {
                done.push(c);
                continue;
            }
            for &g in &flats {
                if g & last == last && g != last {
                    let mut d = c.clone();
                    d.push(g);
                    stack.push(d);
                }
            }
        }
        done
    }

    /// Whether `x` lies on the Bergman fan: on every circuit the minimum of `x` is attained twice.
    pub fn in_support<T: Ord + Clone>(&self, x: &[T]) -> bool {
        self.circuits().into_iter().all(|c| {
            let vals: Vec<&T> = (0..self.n).filter(|e| c & (1 << e) != 0).map(|e| &x[e]).collect();
            let min = vals.iter().min().unwrap();
            vals.iter().filter(|v| *v == min).count() >= 2
        })
    }
}

pub fn set(bits: u32) -> ElementSet {
    ElementSet::from_bits(bits)
}

/// Connected loopless multigraphs with at most `max_edges` edges, one per isomorphism class.
pub fn connected_multigraphs(max_edges: usize) -> Vec<Vec<(usize, usize)>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for v in 2..=max_edges + 1 {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        let perms = permutations(v);
        for e in v - 1..=max_edges {
            for multiset in multisets(pairs.len(), e) {
                let edges: Vec<(usize, usize)> = multiset.iter().map(|&j| pairs[j]).collect();
                if !connected(v, &edges) {
                    continue;
                }
                let canon = perms
                    .iter()
                    .map(|p| {
                        let mut es: Vec<(usize, usize)> =
                            edges.iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect();
                        es.sort_unstable();
                        es
                    })
                    .min()
                    .unwrap();
                if seen.insert(canon.clone()) {
                    out.push(canon);
                }
            }
        }
    }
    out
}

fn connected(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut reach = 1u32;
    loop {
        let before = reach;
        for &(a, b) in edges {
            if reach & (1 << a) != 0 || reach & (1 << b) != 0 {
                reach |= 1 << a | 1 << b;
            }
        }
        if reach == before {
            return reach == (1 << v) - 1;
        }
    }
}

fn multisets(items: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in multisets(items, size - 1) {
        let start = rest.last().copied().unwrap_or(0);
        for j in start..items {
            let mut m = rest.clone();
            m.push(j);
            out.push(m);
        }
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub const K4: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Human-readable name and matroid for every member of the exhaustive family:
/// `U_{r,n}` for `1 ≤ r ≤ n ≤ max_n`, connected loopless multigraphs with at
/// most `max_edges` edges, and `K4`.
pub fn family(max_n: usize, max_edges: usize) -> Vec<(String, Matroid)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for r in 1..=n {
            out.push((format!("U_{{{r},{n}}}"), Matroid::uniform(r as i64, n as i64).unwrap()));
        }
    }
    for g in connected_multigraphs(max_edges) {
        out.push((format!("graph {g:?}"), Matroid::graphic(&g).unwrap()));
    }
    out.push(("K4".to_string(), Matroid::graphic(&K4).unwrap()));
    out
}

pub fn labelled_uniform(r: usize, labels: &[&str]) -> Matroid {
    Matroid::uniform_on(GroundSet::new(labels.iter().copied()).unwrap(), r).unwrap()
}
