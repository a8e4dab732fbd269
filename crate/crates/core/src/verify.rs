//! Mechanical re-verification of the identities, theorems and conjectured
//! patterns about the genera of `⟨1,1,16n⟩`, `⟨2,2,4n+1,2,2,0⟩`,
//! `⟨1,4,225n,0,0,1⟩`, `⟨2,2,225n,0,0,1⟩` and `⟨1,20,400n⟩`.
//!
//! Every task yields a [`VerificationReport`]: per-case records with full
//! inputs, aggregated into verified / counterexample / inconclusive.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{self, jacobi_symbol};
use crate::correspond::{self, correspondence_graph, involution_scan, respects_spinor, InvolutionReport};
use crate::enumerate::{canonical, rep_count, represents};
use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::genus::{genus_of, genus_symbols, same_genus_checked, spinor_partition, splitting_integer_scan, SpinorPartition};
use crate::lattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Counterexample,
    Inconclusive,
}

impl Status {
    /// Process exit code for the CLI.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Counterexample => 1,
            Status::Inconclusive => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub task: String,
    pub parameters: BTreeMap<String, Value>,
    pub status: Status,
    pub details: Vec<Value>,
    pub runtime_ms: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    KaplanskyIdentity,
    Lemma1,
    Repdiff,
    GenusAgreement,
    SpinorRepresentsOdd,
    SpinorRepresentsEven,
    ChanMatrices,
    #[serde(rename = "involution-16n")]
    Involution16n,
    #[serde(rename = "involution-225n")]
    Involution225n,
    #[serde(rename = "involution-400n")]
    Involution400n,
    RespectsSpinor,
    NoSplitting,
}

impl Task {
    pub const ALL: [Task; 12] = [
        Task::KaplanskyIdentity,
        Task::Lemma1,
        Task::Repdiff,
        Task::GenusAgreement,
        Task::SpinorRepresentsOdd,
        Task::SpinorRepresentsEven,
        Task::ChanMatrices,
        Task::Involution16n,
        Task::Involution225n,
        Task::Involution400n,
        Task::RespectsSpinor,
        Task::NoSplitting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::KaplanskyIdentity => "kaplansky-identity",
            Task::Lemma1 => "lemma1",
            Task::Repdiff => "repdiff",
            Task::GenusAgreement => "genus-agreement",
            Task::SpinorRepresentsOdd => "spinor-represents-odd",
            Task::SpinorRepresentsEven => "spinor-represents-even",
            Task::ChanMatrices => "chan-matrices",
            Task::Involution16n => "involution-16n",
            Task::Involution225n => "involution-225n",
            Task::Involution400n => "involution-400n",
            Task::RespectsSpinor => "respects-spinor",
            Task::NoSplitting => "no-splitting",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::usage(format!("unknown task {s:?}")))
    }
}

/// Which of the two `225n` families to scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `⟨1,4,225n,0,0,1⟩` with `n = u² + uv + 4v²`.
    A,
    /// `⟨2,2,225n,0,0,1⟩` with `n = 2u² + uv + 2v²`.
    B,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Family::A),
            "b" => Ok(Family::B),
            _ => Err(Error::usage(format!("family must be a or b, got {s:?}"))),
        }
    }
}

/// Task parameters; unset values take per-task defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskOptions {
    pub nmax: Option<u64>,
    pub kmax: Option<u64>,
    pub bound: Option<u64>,
    pub samples: Option<u64>,
    pub seed: u64,
    pub n: Vec<u64>,
    pub family: Option<Family>,
    pub deltaratio: Option<u64>,
}

/// One checked case: `Some(true)` passed, `Some(false)` failed, `None` undecided.
struct Case {
    ok: Option<bool>,
    record: Value,
}

impl Case {
    fn new(ok: bool, record: Value) -> Self {
        Case { ok: Some(ok), record: with_ok(record, Some(ok)) }
    }

    fn undecided(record: Value) -> Self {
        Case { ok: None, record: with_ok(record, None) }
    }
}

fn with_ok(mut record: Value, ok: Option<bool>) -> Value {
    if let Value::Object(map) = &mut record {
        map.insert("ok".into(), ok.map_or(Value::Null, Value::Bool));
    }
    record
}

fn aggregate(cases: &[Case]) -> Status {
    if cases.iter().any(|c| c.ok == Some(false)) {
        Status::Counterexample
    } else if cases.is_empty() || cases.iter().any(|c| c.ok.is_none()) {
        Status::Inconclusive
    } else {
        Status::Verified
    }
}

pub fn run(task: Task, options: &TaskOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut parameters = BTreeMap::new();
    let mut param = |name: &str, value: Value| {
        parameters.insert(name.to_string(), value);
    };
    let cases = match task {
        Task::KaplanskyIdentity => {
            let samples = options.samples.unwrap_or(10_000);
            param("samples", json!(samples));
            param("seed", json!(options.seed));
            kaplansky_identity(samples, options.seed)
        }
        Task::Lemma1 => {
            let (nmax, bound) = (options.nmax.unwrap_or(200), options.bound.unwrap_or(10_000));
            param("nmax", json!(nmax));
            param("bound", json!(bound));
            lemma1(nmax, bound)
        }
        Task::Repdiff => {
            let kmax = options.kmax.unwrap_or(99);
            param("kmax", json!(kmax));
            repdiff(kmax)
        }
        Task::GenusAgreement => {
            let kmax = options.kmax.unwrap_or(50);
            param("kmax", json!(kmax));
            genus_agreement(kmax)?
        }
        Task::SpinorRepresentsOdd | Task::SpinorRepresentsEven => {
            let (nmax, bound) = (options.nmax.unwrap_or(100), options.bound.unwrap_or(10_000));
            param("nmax", json!(nmax));
            param("bound", json!(bound));
            spinor_represents(nmax, bound, task == Task::SpinorRepresentsEven)?
        }
        Task::ChanMatrices => {
            let nmax = options.nmax.unwrap_or(100);
            param("nmax", json!(nmax));
            chan_matrices(nmax)
        }
        Task::Involution16n => {
            let nmax = options.nmax.unwrap_or(105);
            param("nmax", json!(nmax));
            involution_16n(nmax)?
        }
        Task::Involution225n => {
            let nmax = options.nmax.unwrap_or(100);
            let family = options.family.unwrap_or(Family::A);
            param("nmax", json!(nmax));
            param("family", json!(family));
            involution_225n(nmax, family)?
        }
        Task::Involution400n => {
            let ns = if options.n.is_empty() { vec![29, 41] } else { options.n.clone() };
            let bound = options.bound.unwrap_or(10_000);
            param("n", json!(ns));
            param("bound", json!(bound));
            involution_400n(&ns, bound)?
        }
        Task::RespectsSpinor => {
            let ratio = options.deltaratio.unwrap_or(5);
            let samples = options.samples.unwrap_or(12);
            param("deltaratio", json!(ratio));
            param("samples", json!(samples));
            param("seed", json!(options.seed));
            respects_spinor_sampling(ratio, samples, options.seed)?
        }
        Task::NoSplitting => {
            let bound = options.bound.unwrap_or(10_000);
            param("bound", json!(bound));
            no_splitting(bound)?
        }
    };
    Ok(VerificationReport {
        task: task.name().to_string(),
        parameters,
        status: aggregate(&cases),
        details: cases.into_iter().map(|c| c.record).collect(),
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Squarefree `n ≤ nmax` that are sums of two squares, with a representation.
pub fn squarefree_two_squares(nmax: u64) -> Vec<(u64, u64, u64)> {
    (1..=nmax)
        .filter(|&n| arith::is_squarefree(n).unwrap_or(false))
        .filter_map(|n| arith::sum_two_squares_primitive(n).map(|(u, v)| (n, u, v)))
        .collect()
}

/// Multipliers `m ≥ 1` with `n·m² ≤ bound` and every prime factor `≡ 1 (mod 4)`.
pub fn jones_pall_multipliers(n: u64, bound: u64) -> Vec<u64> {
    (1..)
        .take_while(|m| n * m * m <= bound)
        .filter(|&m| arith::all_prime_factors_one_mod_four(m).expect("positive"))
        .collect()
}

fn kaplansky_identity(samples: u64, seed: u64) -> Vec<Case> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let n: i64 = rng.gen_range(1..=10_000);
        let [x, y, z]: [i64; 3] = [0; 3].map(|_| rng.gen_range(-10_000..=10_000));
        let f = TernaryForm::new(2, 2, 4 * n + 1, 2, 2, 0).expect("positive definite");
        let lhs = f.evaluate(&[x, y, z]) as i128;
        let rhs = ((x + y + z) as i128).pow(2) + ((x - y) as i128).pow(2) + 4 * n as i128 * (z as i128).pow(2);
        if lhs != rhs {
            failures.push(Case::new(false, json!({"n": n, "point": [x, y, z], "lhs": lhs.to_string(), "rhs": rhs.to_string()})));
        }
    }
    if failures.is_empty() {
        vec![Case::new(true, json!({"samples": samples}))]
    } else {
        failures
    }
}

fn lemma1(nmax: u64, bound: u64) -> Vec<Case> {
    squarefree_two_squares(nmax)
        .into_par_iter()
        .filter(|(n, _, _)| n % 2 == 1)
        .map(|(n, u, v)| {
            let f = TernaryForm::new(2, 2, 4 * n as i64 + 1, 2, 2, 0).expect("valid");
            let ms = jones_pall_multipliers(n, bound);
            let represented: Vec<u64> = ms.iter().copied().filter(|m| rep_count(&f, n * m * m) != 0).collect();
            Case::new(
                represented.is_empty(),
                json!({"n": n, "u": u, "v": v, "form": f.to_string(), "multipliers": ms, "represented": represented}),
            )
        })
        .collect()
}

fn repdiff(kmax: u64) -> Vec<Case> {
    let f = TernaryForm::new(1, 1, 16, 0, 0, 0).expect("valid");
    let g = TernaryForm::new(2, 2, 5, 2, 2, 0).expect("valid");
    (1..=kmax)
        .step_by(2)
        .map(|k| {
            let (rf, rg) = (rep_count(&f, k * k), rep_count(&g, k * k));
            let expected = 4 * jacobi_symbol(-1, k as i64).expect("odd") as i64 * k as i64;
            let diff = rf as i64 - rg as i64;
            Case::new(diff == expected, json!({"k": k, "r_f": rf, "r_g": rg, "difference": diff, "expected": expected}))
        })
        .collect()
}

fn genus_agreement(kmax: u64) -> Result<Vec<Case>> {
    (1..=kmax as i64)
        .into_par_iter()
        .map(|k| {
            let f = TernaryForm::new(1, 1, 16 * k, 0, 0, 0)?;
            let g = TernaryForm::new(2, 2, 4 * k + 1, 2, 2, 0)?;
            let h = g.cyclic_relabel();
            let fi = genus_symbols(&f)?;
            let hi = genus_symbols(&h)?;
            let d = 64 * k as u64;
            let f_ok = (fi.delta, fi.divisor_m, fi.level_n) == (d, 4, d)
                && fi.reciprocal == TernaryForm::new(16 * k, 16 * k, 1, 0, 0, 0)?
                && fi.reciprocal_divisor_mu == d;
            let h_ok = (hi.delta, hi.divisor_m, hi.level_n) == (d, 4, d)
                && hi.reciprocal == TernaryForm::new(4, 8 * k + 1, 8 * k + 1, 2, -4, -4)?;
            let (same, warning) = same_genus_checked(&f, &h)?;
            let (same_g, _) = same_genus_checked(&f, &g)?;
            Ok(Case::new(
                f_ok && h_ok && same && same_g,
                json!({
                    "k": k,
                    "f": f.to_string(),
                    "h": h.to_string(),
                    "f_invariants": fi,
                    "h_invariants": hi,
                    "same_genus": same && same_g,
                    "warning": warning,
                }),
            ))
        })
        .collect()
}

fn spinor_represents(nmax: u64, bound: u64, even: bool) -> Result<Vec<Case>> {
    squarefree_two_squares(nmax)
        .into_iter()
        .filter(|(n, _, _)| (n % 2 == 0) == even)
        .map(|(n, u, v)| {
            let f = TernaryForm::new(1, 1, 16 * n as i64, 0, 0, 0)?;
            let table = genus_of(&f)?;
            let part = spinor_partition(&table, 0, bound)?;
            let home = part.block_of(&f).expect("f is in its genus");
            let ms = jones_pall_multipliers(n, bound);
            let mut home_missing = Vec::new();
            let mut other_representing = Vec::new();
            for (b, block) in part.blocks.iter().enumerate() {
                for &i in block {
                    let g = part.class(i);
                    if b == home {
                        if !represents(&g, n) {
                            home_missing.push(g.to_string());
                        }
                    } else if let Some(m) = ms.iter().find(|&&m| represents(&g, n * m * m)) {
                        other_representing.push(json!({"form": g.to_string(), "m": m}));
                    }
                }
            }
            let two_blocks = part.block_count() == 2;
            Ok(Case::new(
                two_blocks && home_missing.is_empty() && other_representing.is_empty(),
                json!({
                    "n": n, "u": u, "v": v,
                    "genus_size": part.classes.len(),
                    "blocks": part.blocks.iter().map(Vec::len).collect::<Vec<_>>(),
                    "home_block_missing_n": home_missing,
                    "other_block_representing_nm2": other_representing,
                }),
            ))
        })
        .collect()
}

/// The model matrices for every coprime `(u, v)` with `u² + v² ≤ nmax`
/// squarefree, signs included.
fn chan_matrices(nmax: u64) -> Vec<Case> {
    let r = arith::isqrt(nmax as u128) as i64;
    let mut cases = Vec::new();
    for u in -r..=r {
        for v in -r..=r {
            let n = (u * u + v * v) as u64;
            if n == 0 || n > nmax || num_integer::gcd(u, v) != 1 || !arith::is_squarefree(n).unwrap_or(false) {
                continue;
            }
            let ni = n as i64;
            let (p, q) = correspond::model_matrices(u, v);
            let g0 = TernaryForm::new(1, 1, 16 * ni, 0, 0, 0).expect("valid").gram();
            let f0 = TernaryForm::new(1, 1, 16, 0, 0, 0).expect("valid").gram();
            let congruent = |m: &lattice::Mat3, a: &lattice::Mat3| lattice::mul(&lattice::transpose(m), &lattice::mul(a, m));
            let checks = [
                congruent(&p, &g0) == lattice::scale(&f0, ni),
                congruent(&q, &f0) == lattice::scale(&g0, ni),
                lattice::mul(&p, &q) == lattice::scale(&lattice::IDENTITY, ni),
                lattice::mul(&q, &p) == lattice::scale(&lattice::IDENTITY, ni),
                lattice::det(&p) == ni as i128,
                lattice::det(&q) == (ni as i128).pow(2),
            ];
            cases.push(Case::new(checks.iter().all(|&c| c), json!({"n": n, "u": u, "v": v, "P": p, "Q": q, "checks": checks})));
        }
    }
    cases
}

fn involution_record(report: &InvolutionReport) -> Value {
    json!({
        "k": report.k,
        "perfect_matching": report.perfect_matching,
        "crosses_blocks": report.crosses_blocks,
        "pairs": report.partners.iter().enumerate()
            .flat_map(|(i, ps)| ps.iter().filter(move |&&j| j > i).map(move |&j| [report.classes[i].to_string(), report.classes[j].to_string()]))
            .collect::<Vec<_>>(),
    })
}

fn equal_blocks(part: &SpinorPartition) -> bool {
    part.blocks.iter().all(|b| b.len() == part.blocks[0].len())
}

fn involution_16n(nmax: u64) -> Result<Vec<Case>> {
    squarefree_two_squares(nmax)
        .into_par_iter()
        .filter(|(n, _, _)| n % 2 == 1)
        .map(|(n, u, v)| {
            let f = TernaryForm::new(1, 1, 16 * n as i64, 0, 0, 0)?;
            let part = spinor_partition(&genus_of(&f)?, 0, 1000)?;
            let report = involution_scan(&part, 4)?;
            let ok = part.block_count() == 2 && equal_blocks(&part) && report.perfect_matching && report.crosses_blocks;
            Ok(Case::new(
                ok,
                json!({
                    "n": n, "u": u, "v": v,
                    "blocks": part.blocks.iter().map(Vec::len).collect::<Vec<_>>(),
                    "involution": involution_record(&report),
                }),
            ))
        })
        .collect()
}

/// Squarefree values `≤ nmax` prime to 15 of the binary form of the family.
pub fn family_values(family: Family, nmax: u64) -> Vec<u64> {
    let (a, b, c) = match family {
        Family::A => (1i64, 1i64, 4i64),
        Family::B => (2, 1, 2),
    };
    let r = arith::isqrt(4 * nmax as u128) as i64 + 1;
    let mut out = std::collections::BTreeSet::new();
    for u in -r..=r {
        for v in -r..=r {
            let n = a * u * u + b * u * v + c * v * v;
            if n > 0 && n as u64 <= nmax {
                let n = n as u64;
                if n % 3 != 0 && n % 5 != 0 && arith::is_squarefree(n).unwrap_or(false) {
                    out.insert(n);
                }
            }
        }
    }
    out.into_iter().collect()
}

fn involution_225n(nmax: u64, family: Family) -> Result<Vec<Case>> {
    family_values(family, nmax)
        .into_par_iter()
        .map(|n| {
            let c = 225 * n as i64;
            let f = match family {
                Family::A => TernaryForm::new(1, 4, c, 0, 0, 1)?,
                Family::B => TernaryForm::new(2, 2, c, 0, 0, 1)?,
            };
            let part = spinor_partition(&genus_of(&f)?, 0, 1000)?;
            let nine = involution_scan(&part, 9)?;
            let twenty_five = involution_scan(&part, 25)?;
            let ok = part.block_count() == 2
                && equal_blocks(&part)
                && [&nine, &twenty_five].iter().all(|r| r.perfect_matching && r.crosses_blocks);
            Ok(Case::new(
                ok,
                json!({
                    "n": n,
                    "form": f.to_string(),
                    "blocks": part.blocks.iter().map(Vec::len).collect::<Vec<_>>(),
                    "multiplier_9": involution_record(&nine),
                    "multiplier_25": involution_record(&twenty_five),
                }),
            ))
        })
        .collect()
}

/// Labels the four blocks of `gen⟨1,20,400n⟩`: `A` represents both families
/// `5n·m²` (prime factors of `m` all `1 mod 4`) and `n·φ²` (prime factors of
/// `φ` all `1, 3, 7, 9 mod 20`), `B` misses the first, `C` the second, `D` both.
pub fn label_400n_blocks(part: &SpinorPartition, n: u64, bound: u64) -> Option<Vec<char>> {
    let fives: Vec<u64> = jones_pall_multipliers(5 * n, bound).into_iter().map(|m| 5 * n * m * m).collect();
    let phis: Vec<u64> = (1..)
        .take_while(|phi| n * phi * phi <= bound)
        .filter(|&phi| arith::factorize(phi).expect("positive").primes().all(|p| matches!(p % 20, 1 | 3 | 7 | 9)))
        .map(|phi| n * phi * phi)
        .collect();
    let misses = |block: usize, family: &[u64]| {
        part.block_classes(block).iter().all(|f| family.iter().all(|&x| !represents(f, x)))
    };
    let labels: Vec<char> = (0..part.block_count())
        .map(|b| match (misses(b, &fives), misses(b, &phis)) {
            (false, false) => 'A',
            (true, false) => 'B',
            (false, true) => 'C',
            (true, true) => 'D',
        })
        .collect();
    let mut sorted = labels.clone();
    sorted.sort_unstable();
    (sorted == ['A', 'B', 'C', 'D']).then_some(labels)
}

fn involution_400n(ns: &[u64], bound: u64) -> Result<Vec<Case>> {
    let base = TernaryForm::new(1, 20, 400, 0, 0, 0)?;
    let other = TernaryForm::new(4, 5, 400, 0, 0, 0)?;
    let base_table = genus_of(&base)?;
    let base_part = spinor_partition(&base_table, 0, bound)?;
    ns.iter()
        .map(|&n| {
            let f = TernaryForm::new(1, 20, 400 * n as i64, 0, 0, 0)?;
            let table = genus_of(&f)?;
            let part = spinor_partition(&table, 0, bound)?;
            let sizes: Vec<usize> = part.blocks.iter().map(Vec::len).collect();
            let graph = correspondence_graph(&table.classes, &base_table.classes, n)?;
            let respects = respects_spinor(&graph, &part, &base_part)?;
            let edge_base = graph.has_edge(&f, &base);
            let edge_other = graph.has_edge(&f, &other);
            let mut record = json!({
                "n": n,
                "genus_size": table.classes.len(),
                "blocks": sizes,
                "edge_to_1_20_400": edge_base,
                "edge_to_4_5_400": edge_other,
                "correspondence_covers": graph.covers(),
                "respects_spinor": respects,
            });
            if !respects {
                return Ok(Case::new(false, record));
            }
            let Some(labels) = label_400n_blocks(&part, n, bound) else {
                return Ok(Case::undecided(record));
            };
            let block_label = |i: usize| labels[i];
            let twenty_five = involution_scan(&part, 25)?;
            let four = involution_scan(&part, 4)?;
            let swap = |c: char| match c {
                'A' => 'C',
                'C' => 'A',
                'B' => 'D',
                _ => 'B',
            };
            let pairs_ok = twenty_five.perfect_matching
                && (0..twenty_five.classes.len()).all(|i| {
                    twenty_five.partners[i].iter().all(|&j| block_label(twenty_five.block_of[j]) == swap(block_label(twenty_five.block_of[i])))
                });
            let a_pattern: Vec<(char, usize)> = "BCD".chars().map(|c| (c, 0)).collect();
            let four_ok = (0..four.classes.len()).filter(|&i| block_label(four.block_of[i]) == 'A').all(|i| {
                let mut counts = a_pattern.clone();
                for &j in &four.partners[i] {
                    let l = block_label(four.block_of[j]);
                    if let Some(slot) = counts.iter_mut().find(|(c, _)| *c == l) {
                        slot.1 += 1;
                    } else {
                        return false;
                    }
                }
                counts == vec![('B', 2), ('C', 2), ('D', 1)]
            });
            let ok = sizes.len() == 4 && sizes.iter().all(|&s| s == sizes[0]) && pairs_ok && four_ok;
            if let Value::Object(map) = &mut record {
                map.insert("block_labels".into(), json!(labels.iter().map(char::to_string).collect::<Vec<_>>()));
                map.insert("multiplier_25_pairs_a_c_b_d".into(), json!(pairs_ok));
                map.insert("multiplier_4_a_to_b2_c2_d1".into(), json!(four_ok));
                map.insert("multiplier_25".into(), involution_record(&twenty_five));
            }
            Ok(Case::new(ok, record))
        })
        .collect()
}

/// Sampling filter: every genus with several spinor genera met so far has
/// `64 | Δ` or `p³ | Δ` for an odd prime `p`.
fn may_split(delta: u64) -> bool {
    let fact = arith::factorize(delta).expect("positive");
    delta % 64 == 0 || fact.primes().any(|p| p > 2 && fact.exponent(p) >= 3)
}

/// Random genera with two spinor genera, ascended by each prime of the ratio
/// to a genus with a correspondence; checks that, when the target genus also
/// has two spinor genera, the correspondence respects them.
fn respects_spinor_sampling(ratio: u64, samples: u64, seed: u64) -> Result<Vec<Case>> {
    let fact = arith::factorize(ratio)?;
    if ratio < 2 || !fact.is_squarefree() || fact.primes().any(|p| p == 2) {
        return Err(Error::usage("deltaratio must be an odd squarefree integer > 1"));
    }
    let primes: Vec<u64> = fact.primes().collect();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut cases = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut attempts = 0;
    while (cases.len() as u64) < samples && attempts < 5000 * samples {
        attempts += 1;
        let c = [rng.gen_range(1..=6), rng.gen_range(1..=10), rng.gen_range(1..=40), rng.gen_range(-4..=4), rng.gen_range(-4..=4), rng.gen_range(-4..=4)];
        let Ok(f) = TernaryForm::new(c[0], c[1], c[2], c[3], c[4], c[5]) else { continue };
        let delta = f.discriminant();
        if primes.iter().any(|p| delta % p == 0) || !may_split(delta) || seen.contains(&canonical(&f)) {
            continue;
        }
        let table = genus_of(&f)?;
        seen.extend(table.classes.iter().copied());
        let part = spinor_partition(&table, 0, 2000)?;
        if part.block_count() != 2 {
            continue;
        }
        let mut g = f;
        for &p in &primes {
            g = correspond::ascend(&g, p)?;
        }
        let up = genus_of(&g)?;
        let up_part = spinor_partition(&up, 0, 2000)?;
        if up_part.block_count() != 2 {
            continue;
        }
        let graph = correspondence_graph(&up.classes, &table.classes, ratio)?;
        let respects = respects_spinor(&graph, &up_part, &part)?;
        cases.push(Case::new(
            respects && graph.covers(),
            json!({
                "base": f.to_string(),
                "base_delta": f.discriminant(),
                "ascended": g.to_string(),
                "genus_sizes": [table.classes.len(), up.classes.len()],
                "edges": graph.edges.len(),
                "covers": graph.covers(),
                "respects_spinor": respects,
            }),
        ));
    }
    Ok(cases)
}

fn no_splitting(bound: u64) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for (f, expect_empty) in [
        (TernaryForm::new(1, 17, 289, 0, 0, 0)?, true),
        (TernaryForm::new(1, 5, 70, 5, 0, 0)?, true),
        (TernaryForm::new(1, 1, 16, 0, 0, 0)?, false),
    ] {
        let part = spinor_partition(&genus_of(&f)?, 0, bound)?;
        let record = |found: &[u64]| {
            json!({
                "form": f.to_string(),
                "blocks": part.blocks.iter().map(|b| b.iter().map(|&i| part.class(i).to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "splitting_integers": found,
            })
        };
        if part.block_count() < 2 {
            cases.push(Case::undecided(record(&[])));
            continue;
        }
        let found = splitting_integer_scan(&part, bound)?;
        let ok = if expect_empty {
            found.is_empty()
        } else {
            let odd_squares: Vec<u64> = (1..).step_by(2).map(|k: u64| k * k).take_while(|&x| x <= bound).collect();
            found == odd_squares
        };
        cases.push(Case::new(ok, record(&found)));
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_names_roundtrip() {
        for t in Task::ALL {
            assert_eq!(t.name().parse::<Task>().unwrap(), t);
            assert_eq!(serde_json::to_value(t).unwrap(), json!(t.name()));
        }
        assert!("nope".parse::<Task>().is_err());
    }

    #[test]
    fn jones_pall_multipliers_small() {
        assert_eq!(jones_pall_multipliers(1, 200), vec![1, 5, 13]);
        assert_eq!(jones_pall_multipliers(5, 10_000), vec![1, 5, 13, 17, 25, 29, 37, 41]);
    }

    #[test]
    fn family_values_small() {
        assert_eq!(family_values(Family::A, 30), naive_family(1, 1, 4, 30));
        assert_eq!(family_values(Family::B, 30), naive_family(2, 1, 2, 30));
    }

    fn naive_family(a: i64, b: i64, c: i64, nmax: u64) -> Vec<u64> {
        let mut out: Vec<u64> = (1..=nmax)
            .filter(|&n| n % 3 != 0 && n % 5 != 0 && arith::is_squarefree(n).unwrap())
            .filter(|&n| (-12i64..=12).any(|u| (-12i64..=12).any(|v| a * u * u + b * u * v + c * v * v == n as i64)))
            .collect();
        out.dedup();
        out
    }

    #[test]
    fn report_roundtrips_through_json() {
        let report = run(Task::Repdiff, &TaskOptions { kmax: Some(9), ..Default::default() }).unwrap();
        assert_eq!(report.status, Status::Verified);
        let text = serde_json::to_string(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn counterexample_carries_inputs() {
        let cases = vec![Case::new(true, json!({"n": 1})), Case::new(false, json!({"n": 2}))];
        assert_eq!(aggregate(&cases), Status::Counterexample);
        assert_eq!(cases[1].record["n"], 2);
        assert_eq!(aggregate(&[Case::undecided(json!({}))]), Status::Inconclusive);
    }

    #[test]
    fn small_runs_verify() {
        let opts = TaskOptions { nmax: Some(20), kmax: Some(5), bound: Some(1000), samples: Some(200), ..Default::default() };
        for task in [Task::KaplanskyIdentity, Task::Lemma1, Task::GenusAgreement, Task::SpinorRepresentsOdd, Task::SpinorRepresentsEven, Task::ChanMatrices, Task::Involution16n] {
            let r = run(task, &opts).unwrap();
            assert_eq!(r.status, Status::Verified, "{task}: {:?}", r.details);
        }
    }
}
