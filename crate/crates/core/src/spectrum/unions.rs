//! Exhaustive union sizes of line sets in F_q^2 and plane triples in F_q^3.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::SpectrumError;
use crate::constructors::{all_lines, Line2};
use crate::gf::{FElem, FieldSpec};
use crate::polyring::rank;

/// Default cap on the number of subsets visited.
pub const DEFAULT_SUBSET_BUDGET: u64 = 1 << 31;

#[derive(Clone, Copy, Debug)]
struct Bits<const W: usize>([u64; W]);

impl<const W: usize> Bits<W> {
    fn empty() -> Self {
        Bits([0; W])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn or(&self, other: &Self) -> Self {
        let mut out = *self;
        for (o, x) in out.0.iter_mut().zip(&other.0) {
            *o |= x;
        }
        out
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SizeCount {
    pub size: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionSearchResult<T> {
    /// Distinct union sizes, largest first, with the number of subsets attaining each.
    pub top_sizes: Vec<SizeCount>,
    /// The first subset in enumeration order attaining each size.
    pub witnesses: BTreeMap<u64, Vec<T>>,
    pub visited: u64,
}

impl<T> UnionSearchResult<T> {
    pub fn distinct_sizes(&self) -> Vec<u64> {
        self.top_sizes.iter().map(|s| s.size).collect()
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128).min(u64::MAX as u128) as u64
}

#[derive(Default)]
struct SizeTally {
    counts: BTreeMap<u32, u64>,
    first: BTreeMap<u32, Vec<usize>>,
}

impl SizeTally {
    /// `other` covers later subsets in enumeration order.
    fn merge(mut self, other: SizeTally) -> SizeTally {
        for (s, c) in other.counts {
            *self.counts.entry(s).or_default() += c;
        }
        for (s, w) in other.first {
            self.first.entry(s).or_insert(w);
        }
        self
    }
}

/// Tallies unions of all k-subsets of `sets` whose smallest index is `head`.
fn search_from<const W: usize>(sets: &[Bits<W>], k: usize, head: usize) -> SizeTally {
    fn rec<const W: usize>(sets: &[Bits<W>], k: usize, chosen: &mut Vec<usize>, acc: Bits<W>, tally: &mut SizeTally) {
        if chosen.len() == k {
            let size = acc.count();
            *tally.counts.entry(size).or_default() += 1;
            tally.first.entry(size).or_insert_with(|| chosen.clone());
            return;
        }
        let start = chosen.last().map_or(0, |&i| i + 1);
        let remaining = k - chosen.len();
        for i in start..=sets.len() - remaining {
            chosen.push(i);
            rec(sets, k, chosen, acc.or(&sets[i]), tally);
            chosen.pop();
        }
    }
    let mut tally = SizeTally::default();
    let mut chosen = vec![head];
    rec(sets, k, &mut chosen, sets[head], &mut tally);
    tally
}

fn search<const W: usize, T: Clone>(
    sets: &[Bits<W>],
    labels: &[T],
    k: usize,
    heads: std::ops::Range<usize>,
) -> UnionSearchResult<T> {
    // One task per smallest index; merged in index order so witnesses are the first found.
    let tally = heads
        .into_par_iter()
        .map(|head| search_from(sets, k, head))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(SizeTally::default(), SizeTally::merge);
    let visited = tally.counts.values().sum();
    UnionSearchResult {
        top_sizes: tally.counts.iter().rev().map(|(&s, &c)| SizeCount { size: s as u64, count: c }).collect(),
        witnesses: tally
            .first
            .into_iter()
            .map(|(s, idx)| (s as u64, idx.into_iter().map(|i| labels[i].clone()).collect()))
            .collect(),
        visited,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineSearchOptions {
    /// Pin the first line to y = 0; every line set is affinely equivalent to one containing it.
    pub fix_first_line: bool,
    pub budget: u64,
}

impl Default for LineSearchOptions {
    fn default() -> Self {
        LineSearchOptions { fix_first_line: false, budget: DEFAULT_SUBSET_BUDGET }
    }
}

/// Distinct union sizes over all sets of b distinct lines in F_q^2.
pub fn line_union_oracle(
    field: &FieldSpec,
    b: usize,
    opts: &LineSearchOptions,
) -> Result<UnionSearchResult<Line2>, SpectrumError> {
    let q = field.q() as usize;
    if q > 16 {
        return Err(SpectrumError::UnsupportedField(field.q()));
    }
    if !(1..=6).contains(&b) {
        return Err(SpectrumError::InvalidCount(b));
    }
    let lines = all_lines(field);
    let n = lines.len() as u64;
    let subsets = if opts.fix_first_line { binomial(n - 1, b as u64 - 1) } else { binomial(n, b as u64) };
    if subsets > opts.budget {
        return Err(SpectrumError::SubsetBudgetExceeded { subsets, budget: opts.budget });
    }
    let sets: Vec<Bits<4>> = lines
        .iter()
        .map(|line| {
            let mut bits = Bits::empty();
            for x in 0..q {
                for y in 0..q {
                    if line.contains(field, FElem(x as u32), FElem(y as u32)) {
                        bits.set(x * q + y);
                    }
                }
            }
            bits
        })
        .collect();
    let heads = if opts.fix_first_line { 0..1 } else { 0..lines.len() + 1 - b };
    if opts.fix_first_line && b > 1 {
        // Spread the pinned search over the second line.
        let tally = (1..=lines.len() - (b - 1))
            .into_par_iter()
            .map(|second| {
                let rest = &sets[second..];
                let mut t = search_from_pinned(&sets[0], rest, b - 1);
                for idx in t.first.values_mut() {
                    for i in idx.iter_mut() {
                        *i += second;
                    }
                    idx.insert(0, 0);
                }
                t
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(SizeTally::default(), SizeTally::merge);
        return Ok(UnionSearchResult {
            visited: tally.counts.values().sum(),
            top_sizes: tally.counts.iter().rev().map(|(&s, &c)| SizeCount { size: s as u64, count: c }).collect(),
            witnesses: tally
                .first
                .into_iter()
                .map(|(s, idx)| (s as u64, idx.into_iter().map(|i| lines[i]).collect()))
                .collect(),
        });
    }
    Ok(search(&sets, &lines, b, heads))
}

/// Subsets of `rest` of size k that contain rest[0], each joined with `pinned`.
fn search_from_pinned<const W: usize>(pinned: &Bits<W>, rest: &[Bits<W>], k: usize) -> SizeTally {
    let shifted: Vec<Bits<W>> = rest.iter().map(|s| s.or(pinned)).collect();
    search_from(&shifted, k, 0)
}

/// An affine plane `a . x = c` in F_q^3, normalized so the first nonzero of `a` is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Plane3 {
    pub normal: [FElem; 3],
    pub c: FElem,
}

impl Plane3 {
    pub fn contains(&self, field: &FieldSpec, x: [FElem; 3]) -> bool {
        let dot = (0..3).fold(FElem::ZERO, |acc, i| field.add(acc, field.mul(self.normal[i], x[i])));
        dot == self.c
    }

    pub fn is_parallel(&self, other: &Plane3) -> bool {
        self.normal == other.normal
    }
}

/// All q^3 + q^2 + q planes, starting with x_1 = 0.
pub fn all_planes(field: &FieldSpec) -> Vec<Plane3> {
    let mut normals = Vec::new();
    for a2 in field.elements() {
        for a3 in field.elements() {
            normals.push([FElem::ONE, a2, a3]);
        }
    }
    for a3 in field.elements() {
        normals.push([FElem::ZERO, FElem::ONE, a3]);
    }
    normals.push([FElem::ZERO, FElem::ZERO, FElem::ONE]);
    normals.into_iter().flat_map(|normal| field.elements().map(move |c| Plane3 { normal, c })).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PlaneConfig {
    /// All three parallel.
    Parallel,
    /// Exactly two parallel.
    TwoParallel,
    /// Pairwise non-parallel, through a common line.
    Pencil,
    /// Pairwise non-parallel with dependent normals but no common line.
    Prism,
    /// Independent normals: the planes meet in a single point.
    Point,
}

pub fn classify_planes(field: &FieldSpec, planes: &[Plane3; 3]) -> PlaneConfig {
    let parallel_pairs = (0..3).filter(|&i| planes[i].is_parallel(&planes[(i + 1) % 3])).count();
    match parallel_pairs {
        3 => return PlaneConfig::Parallel,
        1 => return PlaneConfig::TwoParallel,
        _ => {}
    }
    let normals: Vec<Vec<FElem>> = planes.iter().map(|p| p.normal.to_vec()).collect();
    if rank(field, normals.clone()) == 3 {
        return PlaneConfig::Point;
    }
    let augmented: Vec<Vec<FElem>> = planes.iter().map(|p| [&p.normal[..], &[p.c]].concat()).collect();
    if rank(field, augmented) == 2 {
        PlaneConfig::Pencil
    } else {
        PlaneConfig::Prism
    }
}

/// Distinct union sizes over sets of 3 distinct planes in F_q^3 containing x_1 = 0.
pub fn plane_union_oracle(field: &FieldSpec, count: usize) -> Result<UnionSearchResult<Plane3>, SpectrumError> {
    let q = field.q() as usize;
    if q > 9 {
        return Err(SpectrumError::UnsupportedField(field.q()));
    }
    if count != 3 {
        return Err(SpectrumError::InvalidCount(count));
    }
    let planes = all_planes(field);
    let sets: Vec<Bits<12>> = planes
        .iter()
        .map(|plane| {
            let mut bits = Bits::empty();
            for idx in 0..q * q * q {
                let x = [FElem((idx / (q * q)) as u32), FElem((idx / q % q) as u32), FElem((idx % q) as u32)];
                if plane.contains(field, x) {
                    bits.set(idx);
                }
            }
            bits
        })
        .collect();
    Ok(search(&sets, &planes, count, 0..1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_of_lines() {
        let f4 = FieldSpec::of_order(4).unwrap();
        let res = line_union_oracle(&f4, 2, &LineSearchOptions::default()).unwrap();
        assert_eq!(res.distinct_sizes(), vec![8, 7]);
        assert_eq!(res.visited, 190);
    }

    #[test]
    fn pinning_keeps_sizes() {
        let f5 = FieldSpec::of_order(5).unwrap();
        let free = line_union_oracle(&f5, 3, &LineSearchOptions::default()).unwrap();
        let pinned =
            line_union_oracle(&f5, 3, &LineSearchOptions { fix_first_line: true, ..Default::default() }).unwrap();
        assert_eq!(free.distinct_sizes(), pinned.distinct_sizes());
        assert_eq!(pinned.visited, binomial(29, 2));
        for (size, lines) in &pinned.witnesses {
            assert_eq!(lines[0], Line2::horizontal(FElem::ZERO));
            let covered =
                (0..25).filter(|&i| lines.iter().any(|l| l.contains(&f5, FElem(i / 5), FElem(i % 5)))).count();
            assert_eq!(covered as u64, *size);
        }
    }

    #[test]
    fn plane_sizes_at_five() {
        let f5 = FieldSpec::of_order(5).unwrap();
        let res = plane_union_oracle(&f5, 3).unwrap();
        assert_eq!(&res.distinct_sizes()[..4], &[75, 65, 61, 60]);
        let w = &res.witnesses[&61];
        assert_eq!(classify_planes(&f5, &[w[0], w[1], w[2]]), PlaneConfig::Point);
        let w = &res.witnesses[&60];
        assert_eq!(classify_planes(&f5, &[w[0], w[1], w[2]]), PlaneConfig::Prism);
        assert_eq!(all_planes(&f5).len(), 155);
        assert!(plane_union_oracle(&f5, 2).is_err());
    }
}
