//! Fair subsets for a pair of laminar families.
//!
//! Given laminar families `A` and `B` over a ground set `S` and `n ≥ 1`,
//! [`fair_split`] finds `Z ⊆ S` with `⌊|P|/n⌋ ≤ |Z ∩ P| ≤ ⌈|P|/n⌉` for every
//! `P ∈ A ∪ B ∪ {S}`.
//!
//! Each family is arranged as a forest under inclusion. Flow enters at the
//! root of the `A` forest, runs down to the smallest `A`-set holding each
//! element, crosses a unit arc for that element into the smallest `B`-set
//! holding it, and climbs the `B` forest to the sink. The flow on the arc
//! above a set is `|Z ∩ P|`, so the bounds become arc bounds. The constraint
//! matrix is a network matrix, hence an integral solution exists whenever
//! the fractional point `x ≡ 1/n` does, which is always.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::Circulation;

/// Largest ground set [`brute_force_split`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 22;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaminarFamily {
    sets: Vec<BTreeSet<usize>>,
}

impl LaminarFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_sets<I, S>(sets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        LaminarFamily {
            sets: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn push(&mut self, set: BTreeSet<usize>) {
        self.sets.push(set);
    }

    pub fn sets(&self) -> &[BTreeSet<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    fn crossing_pair(&self) -> Option<(&BTreeSet<usize>, &BTreeSet<usize>)> {
        for (i, a) in self.sets.iter().enumerate() {
            for b in &self.sets[i + 1..] {
                let nested = a.is_subset(b) || b.is_subset(a);
                if !nested && !a.is_disjoint(b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Every pair of members is nested or disjoint.
    pub fn is_laminar(&self) -> bool {
        self.crossing_pair().is_none()
    }

    fn check(&self, ground: &BTreeSet<usize>) -> Result<()> {
        if self.sets.iter().any(|s| !s.is_subset(ground)) {
            return Err(Error::SetOutsideGround);
        }
        if let Some((a, b)) = self.crossing_pair() {
            return Err(Error::NotLaminar(
                a.iter().copied().collect(),
                b.iter().copied().collect(),
            ));
        }
        Ok(())
    }
}

/// Laminarity of `family` as a family of subsets of `ground`.
pub fn is_laminar(ground: &BTreeSet<usize>, family: &LaminarFamily) -> Result<bool> {
    if family.sets.iter().any(|s| !s.is_subset(ground)) {
        return Err(Error::SetOutsideGround);
    }
    Ok(family.is_laminar())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub set: Vec<usize>,
    pub hit: usize,
    pub floor: usize,
    pub ceil: usize,
}

/// A proposed subset together with every constraint it violates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCertificate {
    pub subset: BTreeSet<usize>,
    pub violations: Vec<Violation>,
}

impl SplitCertificate {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `subset` against every member of `a`, `b`, and the ground set.
pub fn certify(
    ground: &BTreeSet<usize>,
    a: &LaminarFamily,
    b: &LaminarFamily,
    n: usize,
    subset: &BTreeSet<usize>,
) -> SplitCertificate {
    assert!(n > 0);
    let mut violations = Vec::new();
    let all = std::iter::once(ground).chain(a.sets.iter()).chain(b.sets.iter());
    for p in all {
        let hit = subset.intersection(p).count();
        let floor = p.len() / n;
        let ceil = p.len().div_ceil(n);
        if hit < floor || hit > ceil {
            violations.push(Violation {
                set: p.iter().copied().collect(),
                hit,
                floor,
                ceil,
            });
        }
    }
    if !subset.is_subset(ground) {
        violations.push(Violation {
            set: subset.difference(ground).copied().collect(),
            hit: 0,
            floor: 0,
            ceil: 0,
        });
    }
    SplitCertificate {
        subset: subset.clone(),
        violations,
    }
}

/// Inclusion forest of a laminar family over element indices `0..size`,
/// always rooted at the full ground set.
struct Forest {
    sets: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    leaf: Vec<usize>,
}

impl Forest {
    fn build(family: &LaminarFamily, index: &HashMap<usize, usize>, size: usize) -> Forest {
        let mut distinct: BTreeSet<Vec<usize>> = family
            .sets
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| {
                let mut v: Vec<usize> = s.iter().map(|x| index[x]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        distinct.insert((0..size).collect());
        let mut sets: Vec<Vec<usize>> = distinct.into_iter().collect();
        sets.sort_by(|x, y| y.len().cmp(&x.len()).then_with(|| x.cmp(y)));

        let mut parent = vec![None; sets.len()];
        for i in 1..sets.len() {
            let probe = sets[i][0];
            parent[i] = (0..i).rev().find(|&j| sets[j].binary_search(&probe).is_ok());
        }
        let mut leaf = vec![0; size];
        for (i, s) in sets.iter().enumerate() {
            for &x in s {
                leaf[x] = i;
            }
        }
        Forest { sets, parent, leaf }
    }
}

/// Finds `Z ⊆ ground` with `|Z ∩ P| ≈ |P|/n` for every `P` in `a`, `b`, and
/// the ground set itself. Output is deterministic in the inputs.
pub fn fair_split(
    ground: &BTreeSet<usize>,
    a: &LaminarFamily,
    b: &LaminarFamily,
    n: usize,
) -> Result<SplitCertificate> {
    if n == 0 {
        return Err(Error::ZeroParts);
    }
    a.check(ground)?;
    b.check(ground)?;
    let elements: Vec<usize> = ground.iter().copied().collect();
    if elements.is_empty() {
        return Ok(certify(ground, a, b, n, &BTreeSet::new()));
    }
    let index: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let fa = Forest::build(a, &index, elements.len());
    let fb = Forest::build(b, &index, elements.len());

    let mut net = Circulation::new(2);
    let (source, sink) = (0, 1);
    let bounds = |len: usize| ((len / n) as i64, Some(len.div_ceil(n) as i64));

    let a_nodes: Vec<usize> = fa.sets.iter().map(|_| net.add_node()).collect();
    for (i, s) in fa.sets.iter().enumerate() {
        let from = fa.parent[i].map_or(source, |p| a_nodes[p]);
        let (lo, hi) = bounds(s.len());
        net.add_arc(from, a_nodes[i], lo, hi);
    }
    let b_nodes: Vec<usize> = fb.sets.iter().map(|_| net.add_node()).collect();
    for (i, s) in fb.sets.iter().enumerate() {
        let to = fb.parent[i].map_or(sink, |p| b_nodes[p]);
        let (lo, hi) = bounds(s.len());
        net.add_arc(b_nodes[i], to, lo, hi);
    }
    let element_arcs: Vec<usize> = (0..elements.len())
        .map(|x| net.add_arc(a_nodes[fa.leaf[x]], b_nodes[fb.leaf[x]], 0, Some(1)))
        .collect();
    net.add_arc(sink, source, 0, None);

    let flow = net.solve().ok_or(Error::SplitInfeasible)?;
    let subset: BTreeSet<usize> = element_arcs
        .iter()
        .enumerate()
        .filter(|&(_, &arc)| flow[arc] == 1)
        .map(|(x, _)| elements[x])
        .collect();

    let cert = certify(ground, a, b, n, &subset);
    if !cert.is_valid() {
        // The flow model and the certificate disagree: a solver bug.
        return Err(Error::SplitInfeasible);
    }
    Ok(cert)
}

/// Exhaustive search for a fair subset. Test oracle; refuses ground sets
/// larger than [`BRUTE_FORCE_LIMIT`]. Does not require laminarity.
pub fn brute_force_split(
    ground: &BTreeSet<usize>,
    a: &LaminarFamily,
    b: &LaminarFamily,
    n: usize,
) -> Result<Option<BTreeSet<usize>>> {
    if n == 0 {
        return Err(Error::ZeroParts);
    }
    if ground.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::GroundTooLarge(ground.len()));
    }
    if a.sets.iter().chain(b.sets.iter()).any(|s| !s.is_subset(ground)) {
        return Err(Error::SetOutsideGround);
    }
    let elements: Vec<usize> = ground.iter().copied().collect();
    let constraints: Vec<&BTreeSet<usize>> = std::iter::once(ground)
        .chain(a.sets.iter())
        .chain(b.sets.iter())
        .collect();
    let member_of: Vec<Vec<usize>> = elements
        .iter()
        .map(|x| {
            constraints
                .iter()
                .enumerate()
                .filter(|(_, p)| p.contains(x))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    struct Search<'a> {
        member_of: &'a [Vec<usize>],
        floor: Vec<usize>,
        ceil: Vec<usize>,
        hit: Vec<usize>,
        left: Vec<usize>,
        chosen: Vec<bool>,
    }

    impl Search<'_> {
        fn run(&mut self, x: usize) -> bool {
            if x == self.member_of.len() {
                return true;
            }
            for take in [false, true] {
                let mut ok = true;
                for &c in &self.member_of[x] {
                    self.left[c] -= 1;
                    if take {
                        self.hit[c] += 1;
                    }
                    if self.hit[c] > self.ceil[c] || self.hit[c] + self.left[c] < self.floor[c] {
                        ok = false;
                    }
                }
                self.chosen[x] = take;
                if ok && self.run(x + 1) {
                    return true;
                }
                for &c in &self.member_of[x] {
                    self.left[c] += 1;
                    if take {
                        self.hit[c] -= 1;
                    }
                }
            }
            false
        }
    }

    let mut search = Search {
        member_of: &member_of,
        floor: constraints.iter().map(|p| p.len() / n).collect(),
        ceil: constraints.iter().map(|p| p.len().div_ceil(n)).collect(),
        hit: vec![0; constraints.len()],
        left: constraints.iter().map(|p| p.len()).collect(),
        chosen: vec![false; elements.len()],
    };
    if !search.run(0) {
        return Ok(None);
    }
    Ok(Some(
        elements
            .iter()
            .zip(&search.chosen)
            .filter(|(_, &c)| c)
            .map(|(&x, _)| x)
            .collect(),
    ))
}
