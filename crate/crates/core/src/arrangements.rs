//! Block hyperplane arrangements in F_q^m.
//!
//! An arrangement type is a multiset of block sizes; block i holds d_i
//! parallel hyperplanes and the block directions are independent, so the
//! union has `q^m - q^{m-k} ∏(q - d_i)` points. The named configurations
//! below are the candidates for the three largest unions among types with
//! `Σ d_i <= d`, where `d = t(q-1) + s`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("{k} blocks exceed the dimension {m}")]
    TooManyBlocks { k: usize, m: u32 },
    #[error("block of size {size} is outside 1..=q-1 for q = {q}")]
    BlockTooBig { size: u32, q: u32 },
    #[error("no closed form covers q={q} m={m} d={d}")]
    UncoveredCase { q: u32, m: u32, d: u32 },
    #[error("d = {d} is outside 1..=m(q-1)")]
    OutOfRangeD { d: u32 },
}

/// Block sizes, kept in descending order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ArrangementType {
    sizes: Vec<u32>,
}

impl ArrangementType {
    pub fn new(mut sizes: Vec<u32>) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        ArrangementType { sizes }
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn total(&self) -> u32 {
        self.sizes.iter().sum()
    }
}

impl fmt::Display for ArrangementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.sizes.iter().map(u32::to_string).collect();
        write!(f, "({},[{}])", self.k(), sizes.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ConfigTag {
    Tmax,
    T1,
    T2,
    T3,
    T4,
    T1a,
    T1b,
    T1c,
    T1d,
    T1e,
    T2a,
    T3a,
    T3b,
    T3c,
    T3d,
    T3e,
    T4a,
    Other,
}

impl ConfigTag {
    pub const NAMED: [ConfigTag; 17] = [
        ConfigTag::Tmax,
        ConfigTag::T1,
        ConfigTag::T2,
        ConfigTag::T3,
        ConfigTag::T4,
        ConfigTag::T1a,
        ConfigTag::T1b,
        ConfigTag::T1c,
        ConfigTag::T1d,
        ConfigTag::T1e,
        ConfigTag::T2a,
        ConfigTag::T3a,
        ConfigTag::T3b,
        ConfigTag::T3c,
        ConfigTag::T3d,
        ConfigTag::T3e,
        ConfigTag::T4a,
    ];
}

impl fmt::Display for ConfigTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// `d = t(q-1) + s` with `0 <= s <= q-2`.
pub fn split_d(q: u32, d: u32) -> (u32, u32) {
    (d / (q - 1), d % (q - 1))
}

pub fn n_points(q: u32, m: u32, ty: &ArrangementType) -> Result<u64, ArrangementError> {
    if ty.k() > m as usize {
        return Err(ArrangementError::TooManyBlocks { k: ty.k(), m });
    }
    if let Some(&size) = ty.sizes.iter().find(|&&d| d == 0 || d >= q) {
        return Err(ArrangementError::BlockTooBig { size, q });
    }
    if ty.k() == 0 {
        return Ok(0);
    }
    let q = q as u64;
    let missing: u64 = ty.sizes.iter().map(|&d| q - d as u64).product();
    Ok(q.pow(m) - q.pow(m - ty.k() as u32) * missing)
}

fn pw(q: i128, e: i64) -> i128 {
    assert!(e >= 0, "negative exponent");
    q.pow(e as u32)
}

/// The stated point count of a named configuration.
pub fn closed_form(tag: ConfigTag, q: u32, m: u32, t: u32, s: u32) -> u64 {
    let (q, m, t, s) = (q as i128, m as i64, t as i64, s as i128);
    let full = pw(q, m);
    let removed = match tag {
        ConfigTag::Tmax if t == m => 1,
        ConfigTag::Tmax => (q - s) * pw(q, m - t - 1),
        ConfigTag::T1 => 2 * (q - s - 1) * pw(q, m - t - 1),
        ConfigTag::T2 => 2 * (q - 1) * (q - s) * pw(q, m - t - 2),
        ConfigTag::T3 => (q - s + 1) * (q - 1) * pw(q, m - t - 2),
        ConfigTag::T4 => pw(q, m - t),
        ConfigTag::T1a => 3 * (q - 2) * pw(q, m - t - 1),
        ConfigTag::T1b => 3 * (q - 1) * (q - 1) * pw(q, m - t - 2),
        ConfigTag::T1c => 4 * (q - 2) * pw(q, m - t - 1),
        ConfigTag::T1d => 4 * (q - 1) * (q - 1) * pw(q, m - t - 2),
        ConfigTag::T1e => 2 * pw(q, m - t),
        ConfigTag::T2a => 32 * pw(3, m - t - 3),
        ConfigTag::T3a => pw(q, m - t - 3) * (q - 1) * (q - 1) * (q - s + 2),
        ConfigTag::T3b => 2 * (q - 2) * (q - s + 1) * pw(q, m - t - 2),
        ConfigTag::T3c => 2 * (q - 1) * (q - 1) * (q - s + 1) * pw(q, m - t - 3),
        ConfigTag::T3d => (q - 2) * (q - s + 2) * pw(q, m - t - 2),
        ConfigTag::T3e => (q - s + 1) * pw(q, m - t - 1),
        ConfigTag::T4a => 2 * (q - 1) * pw(q, m - t - 1),
        ConfigTag::Other => panic!("Other has no closed form"),
    };
    (full - removed) as u64
}

/// The block sizes of a named configuration, when its validity range covers (q, m, t, s).
pub fn named_type(tag: ConfigTag, q: u32, m: u32, t: u32, s: u32) -> Option<ArrangementType> {
    let (qi, mi, ti, si) = (q as i64, m as i64, t as i64, s as i64);
    let in_range = |lo: i64, x: i64, hi: i64| lo <= x && x <= hi;
    let s0 = s == 0 && in_range(1, ti, mi - 1);
    let q3s1 = q == 3 && s == 1 && in_range(1, ti, mi - 2);
    let t3 = q >= 4 && in_range(0, ti, mi - 2) && in_range(2, si, qi - 2);
    let t4 = s == 1 && ((q >= 4 && ti <= mi - 1) || (q == 3 && ti == mi - 1));
    let valid = match tag {
        ConfigTag::Tmax => true,
        ConfigTag::T1 => in_range(1, ti, mi - 1) && si <= qi - 3,
        ConfigTag::T2 => in_range(1, ti, mi - 2) && in_range(1, si, qi - 2),
        ConfigTag::T3 => in_range(0, ti, mi - 2) && in_range(2, si, qi - 2),
        ConfigTag::T4 => s == 1 && ti <= mi - 1,
        ConfigTag::T1a => s0,
        ConfigTag::T1b => s0 && ti <= mi - 2,
        ConfigTag::T1c => s0 && ti >= 2,
        ConfigTag::T1d => s0 && in_range(2, ti, mi - 2),
        ConfigTag::T1e => s0,
        ConfigTag::T2a => q3s1 && in_range(2, ti, mi - 3),
        ConfigTag::T3a => t3 && ti <= mi - 3 && si >= 3,
        ConfigTag::T3b => t3 && ti >= 1,
        ConfigTag::T3c => t3 && in_range(1, ti, mi - 3),
        ConfigTag::T3d => t3 && si >= 4,
        ConfigTag::T3e => t3,
        ConfigTag::T4a => t4 && ti >= 1,
        ConfigTag::Other => false,
    };
    if !valid {
        return None;
    }
    let full = |n: u32| vec![q - 1; n as usize];
    let mut sizes = match tag {
        ConfigTag::Tmax => [full(t), vec![s]].concat(),
        ConfigTag::T1 => [full(t - 1), vec![q - 2, s + 1]].concat(),
        ConfigTag::T2 => [full(t - 1), vec![q - 2, s, 1]].concat(),
        ConfigTag::T3 => [full(t), vec![s - 1, 1]].concat(),
        ConfigTag::T4 => full(t),
        ConfigTag::T1a => [full(t - 1), vec![q - 3, 2]].concat(),
        ConfigTag::T1b => [full(t - 1), vec![q - 3, 1, 1]].concat(),
        ConfigTag::T1c => [full(t - 2), vec![q - 2, q - 2, 2]].concat(),
        ConfigTag::T1d => [full(t - 2), vec![q - 2, q - 2, 1, 1]].concat(),
        ConfigTag::T1e => [full(t - 1), vec![q - 2]].concat(),
        ConfigTag::T2a => [vec![2; t as usize - 2], vec![1; 5]].concat(),
        ConfigTag::T3a => [full(t), vec![1, 1, s - 2]].concat(),
        ConfigTag::T3b => [full(t - 1), vec![q - 2, s - 1, 2]].concat(),
        ConfigTag::T3c => [full(t - 1), vec![q - 2, 1, 1, s - 1]].concat(),
        ConfigTag::T3d => [full(t), vec![s - 2, 2]].concat(),
        ConfigTag::T3e => [full(t), vec![s - 1]].concat(),
        ConfigTag::T4a => [full(t - 1), vec![q - 2, 1]].concat(),
        ConfigTag::Other => unreachable!(),
    };
    // A block of zero hyperplanes is no block at all.
    sizes.retain(|&d| d > 0);
    let ty = ArrangementType::new(sizes);
    (ty.k() <= m as usize && ty.sizes.iter().all(|&d| d < q) && ty.total() <= t * (q - 1) + s).then_some(ty)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub tags: Vec<ConfigTag>,
    pub arrangement: ArrangementType,
    pub n: u64,
    /// Closed-form value for each tag, in the same order.
    pub closed_forms: Vec<u64>,
}

fn check_d(q: u32, m: u32, d: u32) -> Result<(u32, u32), ArrangementError> {
    if d == 0 || d > m * (q - 1) {
        return Err(ArrangementError::OutOfRangeD { d });
    }
    Ok(split_d(q, d))
}

/// Every named configuration valid at (q, m, d); coinciding types are merged.
pub fn named_catalog(q: u32, m: u32, d: u32) -> Vec<CatalogEntry> {
    let Ok((t, s)) = check_d(q, m, d) else {
        return Vec::new();
    };
    let mut entries: Vec<CatalogEntry> = Vec::new();
    for tag in ConfigTag::NAMED {
        let Some(ty) = named_type(tag, q, m, t, s) else {
            continue;
        };
        let closed = closed_form(tag, q, m, t, s);
        match entries.iter_mut().find(|e| e.arrangement == ty) {
            Some(entry) => {
                entry.tags.push(tag);
                entry.closed_forms.push(closed);
            }
            None => {
                let n = n_points(q, m, &ty).expect("named types are valid");
                entries.push(CatalogEntry { tags: vec![tag], arrangement: ty, n, closed_forms: vec![closed] });
            }
        }
    }
    entries.sort_by(|a, b| b.n.cmp(&a.n).then_with(|| a.arrangement.sizes.cmp(&b.arrangement.sizes)));
    entries
}

/// The configuration realizing the second largest union.
pub fn second_config(q: u32, m: u32, d: u32) -> Result<(ConfigTag, ArrangementType, u64), ArrangementError> {
    let (t, s) = check_d(q, m, d)?;
    let uncovered = ArrangementError::UncoveredCase { q, m, d };
    let tag = if q >= 4 {
        if (2..=q - 2).contains(&s) && t + 2 <= m {
            ConfigTag::T3
        } else if s == 1 && t < m {
            ConfigTag::T4
        } else if s == 0 && t >= 1 && t < m {
            ConfigTag::T1
        } else {
            return Err(uncovered);
        }
    } else if s == 0 && t >= 1 && t < m {
        ConfigTag::T1
    } else if s == 1 && t >= 1 && t + 2 <= m {
        ConfigTag::T2
    } else if s == 1 && t >= 1 && t + 1 == m {
        ConfigTag::T4
    } else {
        return Err(uncovered);
    };
    let ty = named_type(tag, q, m, t, s).ok_or(uncovered)?;
    let n = n_points(q, m, &ty)?;
    Ok((tag, ty, n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThirdConfig {
    pub n: u64,
    pub winner: ConfigTag,
    /// Other named configurations with the same point count.
    pub ties: Vec<ConfigTag>,
}

fn third_winner(q: u32, m: u32, t: u32, s: u32) -> Option<ConfigTag> {
    let (q, m, t, s) = (q as i64, m as i64, t as i64, s as i64);
    if s == 0 && 1 <= t && t <= m - 1 {
        return match q {
            _ if q >= 7 => Some(ConfigTag::T1e),
            4 if t == m - 1 => Some(ConfigTag::T1e),
            4 => Some(ConfigTag::T1b),
            5 => Some(ConfigTag::T1a),
            3 if t == 1 || t == m - 1 => Some(ConfigTag::T1e),
            3 => Some(ConfigTag::T1d),
            _ => None,
        };
    }
    if q == 3 && s == 1 && 1 <= t && t <= m - 2 {
        return Some(ConfigTag::T4);
    }
    if q >= 4 && 0 <= t && t <= m - 2 && 2 <= s && s <= q - 2 {
        if q >= 7 && 4 <= s && 2 * s <= q + 4 {
            return Some(ConfigTag::T3d);
        }
        if (q >= 8 && 2 * s >= q + 4) || s == 2 || (q >= 5 && t == m - 2 && s == 3) {
            return Some(ConfigTag::T3e);
        }
        if q >= 5 && t <= m - 3 && s == 3 {
            return Some(ConfigTag::T3a);
        }
        return None;
    }
    if s == 1 && ((q >= 4 && t <= m - 1) || (q == 3 && t == m - 1)) {
        return match q {
            _ if q >= 5 => Some(ConfigTag::T1),
            4 if 1 <= t && t <= m - 2 => Some(ConfigTag::T2),
            _ => Some(ConfigTag::T4a),
        };
    }
    None
}

/// The third largest union among types in L_d, per the case analysis.
pub fn n3_prime(q: u32, m: u32, d: u32) -> Result<ThirdConfig, ArrangementError> {
    let (t, s) = check_d(q, m, d)?;
    let uncovered = ArrangementError::UncoveredCase { q, m, d };
    let winner = third_winner(q, m, t, s).ok_or(uncovered.clone())?;
    let ty = named_type(winner, q, m, t, s).ok_or(uncovered)?;
    let n = n_points(q, m, &ty)?;
    let second = second_config(q, m, d)?.2;
    let ties = named_catalog(q, m, d)
        .into_iter()
        .filter(|e| e.n == n && n < second)
        .flat_map(|e| e.tags)
        .filter(|&tag| tag != winner)
        .collect();
    Ok(ThirdConfig { n, winner, ties })
}

/// All types in L_d with their point counts, largest first.
pub fn enumerate_types(q: u32, m: u32, d: u32) -> Vec<(ArrangementType, u64)> {
    fn extend(q: u32, m: u32, budget: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !current.is_empty() {
            out.push(current.clone());
        }
        if current.len() == m as usize {
            return;
        }
        for size in (1..=max.min(budget).min(q - 1)).rev() {
            current.push(size);
            extend(q, m, budget - size, size, current, out);
            current.pop();
        }
    }
    let mut multisets = Vec::new();
    extend(q, m, d, q - 1, &mut Vec::new(), &mut multisets);
    let mut typed: Vec<(ArrangementType, u64)> = multisets
        .into_iter()
        .map(|sizes| {
            let ty = ArrangementType { sizes };
            let n = n_points(q, m, &ty).expect("enumerated types are valid");
            (ty, n)
        })
        .collect();
    typed.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.sizes.cmp(&b.0.sizes)));
    typed
}

/// Largest distinct point counts, at most `count` of them.
pub fn top_distinct(types: &[(ArrangementType, u64)], count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    for &(_, n) in types {
        if out.last() != Some(&n) {
            if out.len() == count {
                break;
            }
            out.push(n);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Top3Report {
    pub q: u32,
    pub m: u32,
    pub d: u32,
    pub t: u32,
    pub s: u32,
    pub expected: Vec<u64>,
    pub measured: Vec<u64>,
    pub mismatches: Vec<String>,
}

impl Top3Report {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the enumerated top three point counts with the closed forms.
pub fn verify_top3(q: u32, m: u32, d: u32) -> Result<Top3Report, ArrangementError> {
    let (t, s) = check_d(q, m, d)?;
    let third = n3_prime(q, m, d)?;
    let second = second_config(q, m, d)?;
    let largest = named_type(ConfigTag::Tmax, q, m, t, s).expect("Tmax is always valid");
    let expected = vec![n_points(q, m, &largest)?, second.2, third.n];
    let measured = top_distinct(&enumerate_types(q, m, d), 3);
    let mut mismatches = Vec::new();
    for (rank, (e, got)) in expected.iter().zip(measured.iter().map(Some).chain(std::iter::repeat(None))).enumerate() {
        if got != Some(e) {
            mismatches.push(format!("rank {}: expected {e}, enumerated {got:?}", rank + 1));
        }
    }
    for entry in named_catalog(q, m, d) {
        for (tag, closed) in entry.tags.iter().zip(&entry.closed_forms) {
            if *closed != entry.n {
                mismatches.push(format!("{tag}: closed form {closed} but {} points", entry.n));
            }
        }
    }
    Ok(Top3Report { q, m, d, t, s, expected, measured, mismatches })
}

/// One row of the arrangements CSV report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub q: u32,
    pub m: u32,
    pub d: u32,
    pub t: u32,
    pub s: u32,
    pub rank: usize,
    pub n: u64,
    pub tags: String,
}

pub const CSV_HEADER: &str = "q,m,d,t,s,rank,N,tags";

impl ReportRow {
    pub fn to_csv(&self) -> String {
        format!("{},{},{},{},{},{},{},{}", self.q, self.m, self.d, self.t, self.s, self.rank, self.n, self.tags)
    }
}

fn tags_for(catalog: &[CatalogEntry], n: u64) -> BTreeSet<ConfigTag> {
    catalog.iter().filter(|e| e.n == n).flat_map(|e| e.tags.iter().copied()).collect()
}

fn join_tags(tags: impl IntoIterator<Item = ConfigTag>) -> String {
    let names: Vec<String> = tags.into_iter().map(|t| t.to_string()).collect();
    if names.is_empty() {
        "Other".to_string()
    } else {
        names.join("|")
    }
}

/// Report rows: enumerated top values when `oracle` is set, otherwise the closed forms.
pub fn report_rows(q: u32, m: u32, d: u32, top: usize, oracle: bool) -> Result<Vec<ReportRow>, ArrangementError> {
    let (t, s) = check_d(q, m, d)?;
    let catalog = named_catalog(q, m, d);
    let row = |rank: usize, n: u64, tags: String| ReportRow { q, m, d, t, s, rank, n, tags };
    let mut rows = Vec::new();
    if oracle {
        for (i, n) in top_distinct(&enumerate_types(q, m, d), top).into_iter().enumerate() {
            rows.push(row(i + 1, n, join_tags(tags_for(&catalog, n))));
        }
        return Ok(rows);
    }
    let largest = named_type(ConfigTag::Tmax, q, m, t, s).expect("Tmax is always valid");
    let n1 = n_points(q, m, &largest)?;
    rows.push(row(1, n1, join_tags(tags_for(&catalog, n1))));
    if let Ok((_, _, n2)) = second_config(q, m, d) {
        rows.push(row(2, n2, join_tags(tags_for(&catalog, n2))));
    }
    if let Ok(third) = n3_prime(q, m, d) {
        let mut tags = third.winner.to_string();
        if !third.ties.is_empty() {
            tags.push_str(";tie:");
            tags.push_str(&join_tags(third.ties.iter().copied()));
        }
        rows.push(row(3, third.n, tags));
    }
    rows.truncate(top);
    Ok(rows)
}
