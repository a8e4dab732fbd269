//! Genus invariants, class enumeration by discriminant, and spinor genera.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, legendre};
use crate::enumerate::{automorphism_count, canonical, represents, theta_series, vectors_up_to};
use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::lattice;
use crate::neighbors;

/// Where a genus symbol lives: an odd prime, or the 2-adic characters at 4 and 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolPlace {
    Odd(u64),
    Four,
    Eight,
}

impl std::fmt::Display for SymbolPlace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SymbolPlace::Odd(p) => write!(f, "{p}"),
            SymbolPlace::Four => write!(f, "4"),
            SymbolPlace::Eight => write!(f, "8"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenusInvariants {
    pub delta: u64,
    pub divisor_m: u64,
    pub level_n: u64,
    pub reciprocal: TernaryForm,
    pub reciprocal_divisor_mu: u64,
    pub symbols_f: Vec<(SymbolPlace, i32)>,
    pub symbols_phi: Vec<(SymbolPlace, i32)>,
}

impl GenusInvariants {
    /// The part of the invariants that two forms of one genus share.
    fn key(&self) -> (u64, u64, u64, u64, &[(SymbolPlace, i32)], &[(SymbolPlace, i32)]) {
        (self.delta, self.divisor_m, self.level_n, self.reciprocal_divisor_mu, &self.symbols_f, &self.symbols_phi)
    }
}

const MIN_SAMPLES: usize = 8;

fn symbol_places(m: u64) -> Vec<SymbolPlace> {
    let mut places: Vec<SymbolPlace> = arith::factorize(m)
        .expect("divisor is positive")
        .primes()
        .filter(|&p| p != 2)
        .map(SymbolPlace::Odd)
        .collect();
    if m % 16 == 0 {
        places.push(SymbolPlace::Four);
    }
    if m % 32 == 0 {
        places.push(SymbolPlace::Eight);
    }
    places
}

fn character(place: SymbolPlace, v: u64) -> Option<i32> {
    match place {
        SymbolPlace::Odd(p) => match legendre(v as i128, p) {
            0 => None,
            x => Some(x),
        },
        _ if v % 2 == 0 => None,
        SymbolPlace::Four => Some(if v % 4 == 1 { 1 } else { -1 }),
        SymbolPlace::Eight => Some(if matches!(v % 8, 1 | 7) { 1 } else { -1 }),
    }
}

/// Symbols of `f` at the places admitted by its divisor `m`, each the common
/// character of primitively represented values prime to the place.
fn symbols(f: &TernaryForm, m: u64) -> Result<Vec<(SymbolPlace, i32)>> {
    let places = symbol_places(m);
    if places.is_empty() {
        return Ok(Vec::new());
    }
    let mut bound = 4 * f.a.max(f.b).max(f.c) as u64;
    loop {
        let values: Vec<u64> = vectors_up_to(f, bound)
            .into_iter()
            .filter(|(v, _)| lattice::is_primitive_vector(v))
            .map(|(_, n)| n)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut out = Vec::with_capacity(places.len());
        let mut enough = true;
        for &place in &places {
            let chars: Vec<i32> = values.iter().filter_map(|&v| character(place, v)).collect();
            if chars.len() < MIN_SAMPLES {
                enough = false;
                break;
            }
            if chars.iter().any(|&c| c != chars[0]) {
                return Err(Error::SymbolUndefined { place: format!("({f}|{place})") });
            }
            out.push((place, chars[0]));
        }
        if enough {
            return Ok(out);
        }
        bound *= 2;
    }
}

pub fn genus_symbols(f: &TernaryForm) -> Result<GenusInvariants> {
    if !f.is_primitive() {
        return Err(Error::InvalidForm { form: f.to_string(), reason: "not primitive".into() });
    }
    let (phi, m) = f.reciprocal_and_divisor();
    let mu = phi.divisor();
    Ok(GenusInvariants {
        delta: f.discriminant(),
        divisor_m: m,
        level_n: f.level(),
        reciprocal: phi,
        reciprocal_divisor_mu: mu,
        symbols_f: symbols(f, m)?,
        symbols_phi: symbols(&phi, mu)?,
    })
}

/// Residues `f(v) mod q` over small primitive vectors, for each `q` among
/// 8 and the odd primes dividing `2Δ`. Forms of one genus agree on these.
fn local_values(f: &TernaryForm) -> Vec<(u64, BTreeSet<u64>)> {
    let mut moduli = vec![8u64];
    moduli.extend(arith::factorize(f.discriminant()).expect("positive").primes().filter(|&p| p != 2));
    let bound = 50 + 4 * f.a.max(f.b).max(f.c) as u64;
    let vectors = vectors_up_to(f, bound);
    moduli
        .into_iter()
        .map(|q| {
            let residues = vectors
                .iter()
                .filter(|(v, _)| lattice::is_primitive_vector(v))
                .map(|(_, n)| n % q)
                .collect();
            (q, residues)
        })
        .collect()
}

/// Genus equality by invariant comparison. When the invariants agree but the
/// represented residues disagree, a warning is logged and the returned
/// diagnostics say so; the answer itself is unaffected.
pub fn same_genus_checked(f: &TernaryForm, g: &TernaryForm) -> Result<(bool, Option<String>)> {
    let fi = genus_symbols(f)?;
    let gi = genus_symbols(g)?;
    let same = fi.key() == gi.key();
    let mut warning = None;
    if same {
        let (lf, lg) = (local_values(f), local_values(g));
        let disagree: Vec<u64> = lf.iter().zip(&lg).filter(|(x, y)| x.1 != y.1).map(|(x, _)| x.0).collect();
        if !disagree.is_empty() {
            let msg = format!("{f} and {g} share genus invariants but represent different residues mod {disagree:?}");
            log::warn!("{msg}");
            warning = Some(msg);
        }
    }
    Ok((same, warning))
}

pub fn same_genus(f: &TernaryForm, g: &TernaryForm) -> Result<bool> {
    Ok(same_genus_checked(f, g)?.0)
}

/// All classes of one discriminant, grouped into genera.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTable {
    pub delta: u64,
    pub classes: Vec<TernaryForm>,
    pub aut_counts: Vec<u64>,
    pub genera: Vec<Vec<usize>>,
    pub provenance: String,
}

impl ClassTable {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Index of the class equivalent to `f`, if present.
    pub fn index_of(&self, f: &TernaryForm) -> Option<usize> {
        let c = canonical(f);
        self.classes.iter().position(|x| *x == c)
    }

    /// Index of the genus containing the class of `f`.
    pub fn genus_index_of(&self, f: &TernaryForm) -> Option<usize> {
        let i = self.index_of(f)?;
        self.genera.iter().position(|g| g.contains(&i))
    }

    pub fn genus_classes(&self, genus: usize) -> Vec<TernaryForm> {
        self.genera[genus].iter().map(|&i| self.classes[i]).collect()
    }

    fn from_classes(delta: u64, classes: Vec<TernaryForm>, genera: Vec<Vec<usize>>, provenance: String) -> Self {
        let aut_counts = classes.par_iter().map(automorphism_count).collect();
        ClassTable { delta, classes, aut_counts, genera, provenance }
    }
}

fn icbrt(n: u64) -> u64 {
    let mut x = 0u64;
    while (x + 1).pow(3) <= n {
        x += 1;
    }
    x
}

/// Coefficient sextuples `⟨a,b,c,r,s,t⟩` of discriminant `delta` with
/// `a ≤ b ≤ c`, `0 ≤ s,t ≤ a`, `|r| ≤ b`, `abc ≤ Δ/2`. Every class has a
/// Minkowski-reduced representative of this shape.
fn reduced_candidates(delta: u64, a: i64) -> BTreeSet<TernaryForm> {
    let d = delta as i128;
    let mut found = BTreeSet::new();
    let a128 = a as i128;
    let b_max = arith::isqrt((delta / (2 * a as u64)) as u128) as i64;
    for b in a..=b_max {
        let b128 = b as i128;
        for t in 0..=a {
            let minor = 4 * a128 * b128 - (t as i128).pow(2);
            if minor <= 0 {
                continue;
            }
            for s in 0..=a {
                for r in -b..=b {
                    let (r128, s128) = (r as i128, s as i128);
                    let num = d - r128 * s128 * t as i128 + a128 * r128 * r128 + b128 * s128 * s128;
                    if num <= 0 || num % minor != 0 {
                        continue;
                    }
                    let c = num / minor;
                    if c < b128 {
                        continue;
                    }
                    if let Ok(f) = TernaryForm::new(a, b, c as i64, r, s, t) {
                        found.insert(canonical(&f));
                    }
                }
            }
        }
    }
    found
}

/// Every class of primitive positive forms of discriminant `delta`, grouped
/// into genera by their invariants.
pub fn enumerate_discriminant(delta: u64) -> Result<ClassTable> {
    if delta == 0 {
        return Err(Error::usage("discriminant must be positive"));
    }
    let a_max = icbrt(delta / 2).max(1) as i64;
    let classes: Vec<TernaryForm> = (1..=a_max)
        .into_par_iter()
        .map(|a| reduced_candidates(delta, a))
        .reduce(BTreeSet::new, |mut x, y| {
            x.extend(y);
            x
        })
        .into_iter()
        .collect();
    let invariants: Vec<GenusInvariants> = classes.par_iter().map(genus_symbols).collect::<Result<_>>()?;
    let mut groups: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for (i, inv) in invariants.iter().enumerate() {
        groups.entry(format!("{:?}", inv.key())).or_default().push(i);
    }
    let mut genera: Vec<Vec<usize>> = groups.into_values().collect();
    genera.sort();
    let provenance = format!("a ≤ {a_max}, a ≤ b ≤ √(Δ/2a), 0 ≤ s,t ≤ a, |r| ≤ b, c solved exactly");
    Ok(ClassTable::from_classes(delta, classes, genera, provenance))
}

/// Odd primes not dividing `Δ` used for neighbour walks.
fn walk_primes(delta: u64) -> Vec<u64> {
    arith::odd_primes().filter(|p| delta % p != 0).take(6).collect()
}

/// The genus of `f` as a one-genus table, built by neighbour closure at
/// several primes; suited to discriminants too large to enumerate.
pub fn genus_of(f: &TernaryForm) -> Result<ClassTable> {
    let f = canonical(f);
    let delta = f.discriminant();
    let primes = walk_primes(delta);
    let classes = neighbors::neighbor_closure(&f, &primes, 100_000)?;
    let key = genus_symbols(&f)?;
    for g in &classes {
        if genus_symbols(g)?.key() != key.key() {
            return Err(Error::SearchExhausted(format!("neighbour {g} of {f} left the genus")));
        }
    }
    let genera = vec![(0..classes.len()).collect()];
    let provenance = format!("neighbour closure at primes {primes:?}");
    Ok(ClassTable::from_classes(delta, classes, genera, provenance))
}

/// Squarefree divisors of `2Δ`, ascending.
pub fn spinor_exception_candidates(delta: u64) -> Vec<u64> {
    let mut t = arith::factorize(2 * delta).expect("positive").squarefree_divisors();
    t.sort_unstable();
    t
}

pub const EXCEPTION_MULTIPLIERS: [u64; 6] = [1, 2, 3, 4, 5, 7];

/// One probe `t·m²` with the per-class answers to "is it represented".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionRow {
    pub t: u64,
    pub m: u64,
    pub represented: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingRow {
    pub j: u64,
    pub measures: Vec<Ratio<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinorPartition {
    /// Class indices of the genus, into the originating table.
    pub genus: Vec<usize>,
    pub classes: Vec<TernaryForm>,
    pub aut_counts: Vec<u64>,
    pub blocks: Vec<Vec<usize>>,
    /// Probes constant on blocks that separate at least two blocks. Booleans
    /// follow the order of `genus`.
    pub exceptional_evidence: Vec<ExceptionRow>,
    /// Integers whose per-block weighted measures differ, when no probe
    /// separates the blocks.
    pub splitting_evidence: Vec<SplittingRow>,
    pub walk_prime: u64,
    pub evidence_bound: u64,
}

impl SpinorPartition {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block containing the class of `f`.
    pub fn block_of(&self, f: &TernaryForm) -> Option<usize> {
        let c = canonical(f);
        let i = self.genus.iter().zip(&self.classes).find(|(_, x)| **x == c)?.0;
        self.blocks.iter().position(|b| b.contains(i))
    }

    pub fn block_classes(&self, block: usize) -> Vec<TernaryForm> {
        self.blocks[block].iter().map(|i| self.class(*i)).collect()
    }

    fn position(&self, index: usize) -> usize {
        self.genus.iter().position(|&g| g == index).expect("index in genus")
    }

    pub fn class(&self, index: usize) -> TernaryForm {
        self.classes[self.position(index)]
    }

    pub fn aut_count(&self, index: usize) -> u64 {
        self.aut_counts[self.position(index)]
    }

    /// True when some recorded probe or splitting integer separates the blocks.
    pub fn has_evidence(&self) -> bool {
        !self.exceptional_evidence.is_empty() || !self.splitting_evidence.is_empty()
    }

    pub fn block_members(&self, block: usize) -> Vec<(TernaryForm, u64)> {
        self.blocks[block].iter().map(|&i| (self.class(i), self.aut_count(i))).collect()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut i = i;
        while self.0[i] != root {
            let next = self.0[i];
            self.0[i] = root;
            i = next;
        }
        root
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.0[ri.max(rj)] = ri.min(rj);
        }
    }
}

/// Spinor genera of a genus as the classes linked by two neighbour steps at
/// one prime. Probes `t·m²` and weighted measures are attached as evidence.
pub fn spinor_partition(table: &ClassTable, genus_index: usize, evidence_bound: u64) -> Result<SpinorPartition> {
    let genus = table
        .genera
        .get(genus_index)
        .filter(|g| !g.is_empty())
        .ok_or_else(|| Error::usage(format!("no genus with index {genus_index}")))?
        .clone();
    let classes: Vec<TernaryForm> = genus.iter().map(|&i| table.classes[i]).collect();
    let aut_counts: Vec<u64> = genus.iter().map(|&i| table.aut_counts[i]).collect();
    let p = neighbors::default_prime(table.delta);
    let position: HashMap<TernaryForm, usize> = classes.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let neighbour_sets: Vec<Vec<usize>> = classes
        .par_iter()
        .map(|f| -> Result<Vec<usize>> {
            neighbors::p_neighbors(f, p)?
                .into_iter()
                .map(|n| {
                    position.get(&n).copied().ok_or_else(|| {
                        Error::SearchExhausted(format!("neighbour {n} of {f} is missing from the genus table"))
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut uf = UnionFind((0..classes.len()).collect());
    for set in &neighbour_sets {
        for w in set.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..classes.len() {
        by_root.entry(uf.find(i)).or_default().push(genus[i]);
    }
    let blocks: Vec<Vec<usize>> = by_root.into_values().collect();
    let mut partition = SpinorPartition {
        genus,
        classes,
        aut_counts,
        blocks,
        exceptional_evidence: Vec::new(),
        splitting_evidence: Vec::new(),
        walk_prime: p,
        evidence_bound,
    };
    if partition.block_count() > 1 {
        partition.exceptional_evidence = exception_rows(&partition, evidence_bound);
        if partition.exceptional_evidence.is_empty() {
            partition.splitting_evidence = splitting_rows(&partition, evidence_bound, Some(1));
        }
    }
    Ok(partition)
}

fn exception_rows(partition: &SpinorPartition, bound: u64) -> Vec<ExceptionRow> {
    let delta = partition.classes[0].discriminant();
    let block_of: Vec<usize> = partition
        .genus
        .iter()
        .map(|i| partition.blocks.iter().position(|b| b.contains(i)).expect("partition"))
        .collect();
    let mut rows = Vec::new();
    for t in spinor_exception_candidates(delta) {
        for m in EXCEPTION_MULTIPLIERS {
            let n = t * m * m;
            if n > bound {
                continue;
            }
            let represented: Vec<bool> = partition.classes.par_iter().map(|f| represents(f, n)).collect();
            let constant_on_blocks = (0..represented.len())
                .all(|i| (0..represented.len()).all(|j| block_of[i] != block_of[j] || represented[i] == represented[j]));
            let separating = represented.iter().any(|&x| x != represented[0]);
            if constant_on_blocks && separating {
                rows.push(ExceptionRow { t, m, represented });
            }
        }
    }
    rows
}

/// `Σ r_f(j) / |Aut f|` over the given classes.
pub fn weighted_measure(classes: &[(TernaryForm, u64)], j: u64) -> Ratio<u64> {
    classes
        .iter()
        .map(|(f, aut)| Ratio::new(crate::enumerate::rep_count(f, j), *aut))
        .fold(Ratio::from_integer(0), |acc, x| acc + x)
}

fn splitting_rows(partition: &SpinorPartition, bound: u64, limit: Option<usize>) -> Vec<SplittingRow> {
    let thetas: Vec<Vec<u64>> = partition.classes.par_iter().map(|f| theta_series(f, bound)).collect();
    let block_positions: Vec<Vec<usize>> = partition
        .blocks
        .iter()
        .map(|b| b.iter().map(|&i| partition.position(i)).collect())
        .collect();
    let mut rows = Vec::new();
    for j in 1..=bound {
        let measures: Vec<Ratio<u64>> = block_positions
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&k| Ratio::new(thetas[k][j as usize], partition.aut_counts[k]))
                    .fold(Ratio::from_integer(0), |acc, x| acc + x)
            })
            .collect();
        if measures.iter().any(|x| *x != measures[0]) {
            rows.push(SplittingRow { j, measures });
            if limit.is_some_and(|l| rows.len() >= l) {
                break;
            }
        }
    }
    rows
}

/// All `j ≤ bound` at which the blocks' weighted measures differ.
pub fn splitting_integer_scan(partition: &SpinorPartition, bound: u64) -> Result<Vec<u64>> {
    if partition.block_count() < 2 {
        return Err(Error::usage("splitting integers need at least two spinor blocks"));
    }
    Ok(splitting_rows(partition, bound, None).into_iter().map(|r| r.j).collect())
}
