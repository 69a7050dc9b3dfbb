//! Exhaustive weight spectra of R_q(r, m) by incremental truth-table updates.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::SpectrumError;
use crate::gf::{FElem, FieldSpec};
use crate::grm::{decompose_r, CodeParams};
use crate::polyring::{Monomial, PolyError, ReducedPoly, DEFAULT_POINT_BUDGET};

/// Default cap on the number of codewords visited.
pub const DEFAULT_CODEWORD_BUDGET: u64 = 1 << 31;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumOptions {
    /// Keep only this many smallest nonzero weights (the zero word is always kept).
    pub max_distinct: Option<usize>,
    /// Drop codewords heavier than this.
    pub weight_cap: Option<u64>,
    pub shards: usize,
    pub codeword_budget: u64,
    pub point_budget: u64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            max_distinct: None,
            weight_cap: None,
            shards: 1,
            codeword_budget: DEFAULT_CODEWORD_BUDGET,
            point_budget: DEFAULT_POINT_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeightCount {
    pub weight: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumResult {
    pub q: u32,
    pub m: u32,
    pub r: u32,
    /// Absent for r = 0, which has no (a, b) split.
    pub params: Option<CodeParams>,
    pub distinct_weights: Vec<WeightCount>,
    /// Lexicographically smallest truth table (element codes) for each listed weight.
    #[serde(serialize_with = "hex_map")]
    pub representatives: BTreeMap<u64, Vec<u8>>,
    pub enumerated: u64,
    /// Codewords excluded by `weight_cap` or `max_distinct`.
    pub omitted: u64,
}

fn hex_map<S: Serializer>(map: &BTreeMap<u64, Vec<u8>>, ser: S) -> Result<S::Ok, S::Error> {
    let as_hex: BTreeMap<String, String> = map.iter().map(|(w, t)| (w.to_string(), hex::encode(t))).collect();
    as_hex.serialize(ser)
}

pub const SPECTRUM_CSV_HEADER: &str = "weight,count,representative_hex";

impl SpectrumResult {
    /// The smallest `count` nonzero weights.
    pub fn nonzero_weights(&self, count: usize) -> Vec<u64> {
        self.distinct_weights.iter().map(|w| w.weight).filter(|&w| w > 0).take(count).collect()
    }

    pub fn count_of(&self, weight: u64) -> Option<u64> {
        self.distinct_weights.iter().find(|w| w.weight == weight).map(|w| w.count)
    }

    /// The representative of `weight` as a reduced polynomial.
    pub fn representative_poly(&self, field: &Arc<FieldSpec>, weight: u64) -> Option<ReducedPoly> {
        let table = self.representatives.get(&weight)?;
        let values: Vec<FElem> = table.iter().map(|&c| FElem(c as u32)).collect();
        ReducedPoly::interpolate(field, self.m as usize, &values).ok()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(SPECTRUM_CSV_HEADER);
        out.push('\n');
        for wc in &self.distinct_weights {
            let rep = self.representatives.get(&wc.weight).map(hex::encode).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", wc.weight, wc.count, rep));
        }
        out
    }
}

/// Reduced monomials of total degree at most r, in lexicographic order.
pub fn monomial_basis(q: u32, m: usize, r: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; m];
    loop {
        if exps.iter().sum::<u32>() <= r {
            out.push(Monomial(exps.clone()));
        }
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < q {
                break;
            }
            exps[i] = 0;
        }
    }
}

/// Read-only tables shared by all shards.
struct Kernel {
    q: usize,
    n: usize,
    add: Vec<u8>,
    /// steps[j][k]: the truth table of (c_{k+1} - c_k) * monomial j, where c_k is the
    /// element with code k and the last step wraps from q-1 back to 0.
    steps: Vec<Vec<Vec<u8>>>,
    /// scaled[j][c]: the truth table of c * monomial j.
    scaled: Vec<Vec<Vec<u8>>>,
    neg: Vec<u8>,
}

#[derive(Clone, Debug, Default)]
struct Tally {
    counts: BTreeMap<u64, u64>,
    reps: BTreeMap<u64, Vec<u8>>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (w, c) in other.counts {
            *self.counts.entry(w).or_default() += c;
        }
        for (w, t) in other.reps {
            match self.reps.get(&w) {
                Some(mine) if *mine <= t => {}
                _ => {
                    self.reps.insert(w, t);
                }
            }
        }
        self
    }
}

impl Kernel {
    fn new(field: &FieldSpec, m: usize, basis: &[Monomial]) -> Result<Self, SpectrumError> {
        let (add, mul, neg) = field.byte_tables().ok_or(SpectrumError::UnsupportedField(field.q()))?;
        let q = field.q() as usize;
        let n = q.pow(m as u32);
        let mut steps = Vec::with_capacity(basis.len());
        let mut scaled = Vec::with_capacity(basis.len());
        for mono in basis {
            let poly = ReducedPoly::reduce(
                &Arc::new(field.clone()),
                m,
                [(mono.0.iter().map(|&e| e as u64).collect(), FElem::ONE)],
            )?;
            let table: Vec<u8> = poly.truth_table_within(n as u64)?.iter().map(|v| v.code() as u8).collect();
            let times = |c: usize| -> Vec<u8> { table.iter().map(|&v| mul[c * q + v as usize]).collect() };
            scaled.push((0..q).map(times).collect::<Vec<_>>());
            steps.push(
                (0..q)
                    .map(|k| {
                        let from = FElem(k as u32);
                        let to = FElem(((k + 1) % q) as u32);
                        times(field.sub(to, from).code() as usize)
                    })
                    .collect::<Vec<_>>(),
            );
        }
        Ok(Kernel { q, n, add: add.to_vec(), steps, scaled, neg: neg.to_vec() })
    }

    /// Visits odometer states `lo..hi`; each state stands for the q codewords T + c.
    fn run(&self, lo: u64, hi: u64, cap: u64) -> Tally {
        let q = self.q;
        let k = self.steps.len();
        let mut digits = vec![0usize; k];
        let mut rest = lo;
        // Position k-1 is least significant.
        for d in digits.iter_mut().rev() {
            *d = (rest % q as u64) as usize;
            rest /= q as u64;
        }
        let mut table = vec![0u8; self.n];
        for (j, &d) in digits.iter().enumerate() {
            if d != 0 {
                let src = &self.scaled[j][d];
                for (t, &s) in table.iter_mut().zip(src) {
                    *t = self.add[*t as usize * q + s as usize];
                }
            }
        }
        let mut tally = Tally::default();
        let mut counts = vec![0u64; self.n + 1];
        let mut hist = vec![0u32; q];
        let mut candidate = vec![0u8; self.n];
        for _ in lo..hi {
            hist.iter_mut().for_each(|h| *h = 0);
            for &v in &table {
                hist[v as usize] += 1;
            }
            for c in 0..q {
                // T + c vanishes exactly where T = -c.
                let weight = (self.n as u32 - hist[self.neg[c] as usize]) as u64;
                if weight > cap {
                    continue;
                }
                counts[weight as usize] += 1;
                let add_c = &self.add[c..];
                let improves = match tally.reps.get(&weight) {
                    None => true,
                    Some(best) => {
                        let mut verdict = false;
                        for (&t, &b) in table.iter().zip(best) {
                            let v = add_c[t as usize * q];
                            if v != b {
                                verdict = v < b;
                                break;
                            }
                        }
                        verdict
                    }
                };
                if improves {
                    for (dst, &t) in candidate.iter_mut().zip(&table) {
                        *dst = add_c[t as usize * q];
                    }
                    tally.reps.insert(weight, candidate.clone());
                }
            }
            // Odometer step with incremental update.
            let mut pos = k;
            while pos > 0 {
                pos -= 1;
                let d = digits[pos];
                let src = &self.steps[pos][d];
                for (t, &s) in table.iter_mut().zip(src) {
                    *t = self.add[*t as usize * q + s as usize];
                }
                digits[pos] = (d + 1) % q;
                if digits[pos] != 0 {
                    break;
                }
            }
        }
        for (w, &c) in counts.iter().enumerate() {
            if c > 0 {
                tally.counts.insert(w as u64, c);
            }
        }
        tally
    }
}

/// Enumerates every codeword of R_q(r, m) and tallies weights.
pub fn exhaustive_spectrum(q: u32, m: u32, r: u32, opts: &SpectrumOptions) -> Result<SpectrumResult, SpectrumError> {
    let field = FieldSpec::of_order(q as u64).map_err(PolyError::from)?;
    exhaustive_spectrum_in(&field, m, r, opts)
}

/// As [`exhaustive_spectrum`], over an explicitly constructed field.
pub fn exhaustive_spectrum_in(
    field: &FieldSpec,
    m: u32,
    r: u32,
    opts: &SpectrumOptions,
) -> Result<SpectrumResult, SpectrumError> {
    let q = field.q();
    if q == 2 {
        return Err(SpectrumError::UnsupportedField(q));
    }
    let params = if r == 0 { None } else { Some(decompose_r(q, m, r)?) };
    let mu = m as usize;
    let points = (q as u64).checked_pow(m).filter(|&n| n <= opts.point_budget);
    let Some(points) = points else {
        return Err(PolyError::SizeBudgetExceeded { points: u64::MAX, budget: opts.point_budget }.into());
    };
    let basis = monomial_basis(q, mu, r);
    let codewords = (q as u64)
        .checked_pow(basis.len() as u32)
        .filter(|&c| c <= opts.codeword_budget)
        .ok_or(SpectrumError::BudgetExceeded { q, m, r, monomials: basis.len(), budget: opts.codeword_budget })?;
    // The constant monomial is handled by the histogram in `Kernel::run`.
    let kernel = Kernel::new(field, mu, &basis[1..])?;
    let states = codewords / q as u64;
    let shards = (opts.shards.max(1) as u64).min(states.max(1));
    let cap = opts.weight_cap.unwrap_or(points);
    let tally = (0..shards)
        .into_par_iter()
        .map(|i| kernel.run(states * i / shards, states * (i + 1) / shards, cap))
        .reduce(Tally::default, Tally::merge);

    let mut distinct_weights = Vec::new();
    let mut representatives = BTreeMap::new();
    let mut kept = 0u64;
    for (&weight, &count) in &tally.counts {
        if weight > 0 && opts.max_distinct.is_some_and(|limit| distinct_weights.len() >= limit + 1) {
            break;
        }
        distinct_weights.push(WeightCount { weight, count });
        representatives.insert(weight, tally.reps[&weight].clone());
        kept += count;
    }
    Ok(SpectrumResult {
        q,
        m,
        r,
        params,
        distinct_weights,
        representatives,
        enumerated: codewords,
        omitted: codewords - kept,
    })
}
