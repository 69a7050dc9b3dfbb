//! Explicit codewords: products of affine factors whose weights realize the
//! closed forms in [`crate::grm`], plus the taxonomy of plane line unions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::arrangements::{n_points, ArrangementType};
use crate::gf::{FElem, FieldSpec};
use crate::grm::{cb_value, decompose_r, third_weight, GrmError};
use crate::ipow;
use crate::polyring::{rank, PolyError, ReducedPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("block linear forms are linearly dependent")]
    DependentForms,
    #[error("shift {0} repeated within a block")]
    RepeatedShift(FElem),
    #[error("a block with q shifts vanishes identically")]
    FullBlock,
    #[error("a block needs at least one shift")]
    EmptyBlock,
    #[error("parameters outside the range of branch {0}")]
    BranchRangeViolation(BoundBranch),
    #[error("family {family} is not available for q={q}, b={b}")]
    FamilyRange { family: TwoVarFamily, q: u32, b: u32 },
    #[error("parameter side condition failed: {0}")]
    ParamSideCondition(String),
    #[error("third weight is not exact at q={q} m={m} a={a} b={b}")]
    NotExactCase { q: u32, m: u32, a: u32, b: u32 },
    #[error("line listed twice")]
    DuplicateLine,
    #[error("a configuration needs at least 3 lines")]
    TooFewLines,
    #[error("(a, b) = (0, 0) does not define a line")]
    DegenerateLine,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Grm(#[from] GrmError),
}

/// The line `a x + b y = c`, normalized so the first nonzero of (a, b) is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Line2 {
    pub a: FElem,
    pub b: FElem,
    pub c: FElem,
}

impl Line2 {
    pub fn new(field: &FieldSpec, a: FElem, b: FElem, c: FElem) -> Result<Self, ConstructError> {
        let lead = if !a.is_zero() {
            a
        } else if !b.is_zero() {
            b
        } else {
            return Err(ConstructError::DegenerateLine);
        };
        let inv = field.inv(lead).expect("nonzero");
        Ok(Line2 { a: field.mul(a, inv), b: field.mul(b, inv), c: field.mul(c, inv) })
    }

    /// `x = c`.
    pub fn vertical(c: FElem) -> Self {
        Line2 { a: FElem::ONE, b: FElem::ZERO, c }
    }

    /// `y = c`.
    pub fn horizontal(c: FElem) -> Self {
        Line2 { a: FElem::ZERO, b: FElem::ONE, c }
    }

    pub fn contains(&self, field: &FieldSpec, x: FElem, y: FElem) -> bool {
        field.add(field.mul(self.a, x), field.mul(self.b, y)) == self.c
    }

    pub fn is_parallel(&self, other: &Line2) -> bool {
        (self.a, self.b) == (other.a, other.b)
    }

    pub fn intersection(&self, field: &FieldSpec, other: &Line2) -> Option<(FElem, FElem)> {
        let det = field.sub(field.mul(self.a, other.b), field.mul(self.b, other.a));
        let inv = field.inv(det).ok()?;
        let x = field.mul(field.sub(field.mul(self.c, other.b), field.mul(self.b, other.c)), inv);
        let y = field.mul(field.sub(field.mul(self.a, other.c), field.mul(self.c, other.a)), inv);
        Some((x, y))
    }

    /// `a x + b y - c` as a function of two variables.
    pub fn poly(&self, field: &Arc<FieldSpec>) -> ReducedPoly {
        ReducedPoly::linear(field, &[self.a, self.b], field.neg(self.c))
    }
}

impl fmt::Display for Line2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x+{}y={}", self.a, self.b, self.c)
    }
}

/// All q^2 + q lines of the plane, horizontal ones first.
pub fn all_lines(field: &FieldSpec) -> Vec<Line2> {
    let mut lines: Vec<Line2> = field.elements().map(Line2::horizontal).collect();
    for b in field.elements() {
        for c in field.elements() {
            lines.push(Line2 { a: FElem::ONE, b, c });
        }
    }
    lines
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LineConfigTag {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

fn concurrent(field: &FieldSpec, lines: &[Line2]) -> bool {
    if lines.len() < 2 {
        return true;
    }
    let Some((x, y)) = lines[0].intersection(field, &lines[1]) else {
        return false;
    };
    lines.iter().all(|l| l.contains(field, x, y)) && pairwise_transversal(lines)
}

fn pairwise_transversal(lines: &[Line2]) -> bool {
    lines.iter().enumerate().all(|(i, l)| lines[i + 1..].iter().all(|o| !l.is_parallel(o)))
}

/// Classifies b distinct lines, testing A through G in order.
pub fn classify_line_configuration(field: &FieldSpec, lines: &[Line2]) -> Result<LineConfigTag, ConstructError> {
    let b = lines.len();
    if b < 3 {
        return Err(ConstructError::TooFewLines);
    }
    if lines.iter().collect::<BTreeSet<_>>().len() != b {
        return Err(ConstructError::DuplicateLine);
    }
    let mut classes: BTreeMap<(FElem, FElem), Vec<Line2>> = BTreeMap::new();
    for l in lines {
        classes.entry((l.a, l.b)).or_default().push(*l);
    }
    if classes.len() == 1 {
        return Ok(LineConfigTag::A);
    }
    if classes.values().any(|c| c.len() == b - 1) {
        return Ok(LineConfigTag::B);
    }
    if concurrent(field, lines) {
        return Ok(LineConfigTag::C);
    }
    for (dir, class) in &classes {
        if class.len() != b - 2 {
            continue;
        }
        let others: Vec<Line2> = lines.iter().filter(|l| (l.a, l.b) != *dir).copied().collect();
        if others[0].is_parallel(&others[1]) {
            return Ok(LineConfigTag::D);
        }
    }
    for (dir, class) in &classes {
        if class.len() != b - 2 {
            continue;
        }
        let others: Vec<Line2> = lines.iter().filter(|l| (l.a, l.b) != *dir).copied().collect();
        if let Some((x, y)) = others[0].intersection(field, &others[1]) {
            if class.iter().any(|l| l.contains(field, x, y)) {
                return Ok(LineConfigTag::E);
            }
        }
    }
    for (i, extra) in lines.iter().enumerate() {
        let rest: Vec<Line2> = lines.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, l)| *l).collect();
        if concurrent(field, &rest) && rest.iter().any(|l| l.is_parallel(extra)) {
            return Ok(LineConfigTag::F);
        }
    }
    Ok(LineConfigTag::G)
}

/// A block's common linear form: a coordinate or explicit coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearForm {
    Coordinate(usize),
    Explicit(Vec<FElem>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub form: LinearForm,
    pub shifts: Vec<FElem>,
}

/// `∏_i ∏_j (f_i(x) - u_ij)`, returned with its arrangement type.
pub fn build_arrangement_poly(
    field: &Arc<FieldSpec>,
    m: usize,
    blocks: &[Block],
) -> Result<(ReducedPoly, ArrangementType), ConstructError> {
    let mut rows = Vec::new();
    for block in blocks {
        let row = match &block.form {
            LinearForm::Coordinate(i) => {
                let mut row = vec![FElem::ZERO; m];
                *row.get_mut(*i).ok_or(PolyError::VariableCountMismatch { expected: m, got: i + 1 })? = FElem::ONE;
                row
            }
            LinearForm::Explicit(c) if c.len() == m => c.clone(),
            LinearForm::Explicit(c) => {
                return Err(PolyError::VariableCountMismatch { expected: m, got: c.len() }.into());
            }
        };
        rows.push(row);
    }
    if rank(field, rows.clone()) < rows.len() {
        return Err(ConstructError::DependentForms);
    }
    let mut factors = Vec::new();
    let mut sizes = Vec::new();
    for (block, row) in blocks.iter().zip(&rows) {
        if block.shifts.is_empty() {
            return Err(ConstructError::EmptyBlock);
        }
        let mut seen = BTreeSet::new();
        for &u in &block.shifts {
            field.element(u.code()).map_err(PolyError::from)?;
            if !seen.insert(u) {
                return Err(ConstructError::RepeatedShift(u));
            }
            factors.push(ReducedPoly::linear(field, row, field.neg(u)));
        }
        if block.shifts.len() >= field.q() as usize {
            return Err(ConstructError::FullBlock);
        }
        sizes.push(block.shifts.len() as u32);
    }
    let poly = ReducedPoly::product(field, m, &factors)?;
    Ok((poly, ArrangementType::new(sizes)))
}

/// `∏ (x_var - u)` over the given shifts.
fn vanishing(field: &Arc<FieldSpec>, m: usize, var: usize, shifts: &[FElem]) -> Result<ReducedPoly, PolyError> {
    let x = ReducedPoly::var(field, m, var);
    let factors: Vec<ReducedPoly> =
        shifts.iter().map(|&u| x.sub(&ReducedPoly::constant(field, m, u))).collect::<Result<_, _>>()?;
    ReducedPoly::product(field, m, &factors)
}

/// `∏_{i < count} (1 - x_{i+1}^{q-1})`, the indicator of x_1 = ... = x_count = 0.
pub fn zero_indicator(field: &Arc<FieldSpec>, m: usize, count: usize) -> Result<ReducedPoly, PolyError> {
    let q = field.q() as u64;
    let one = ReducedPoly::constant(field, m, FElem::ONE);
    let mut acc = one.clone();
    for i in 0..count {
        let mut exps = vec![0u64; m];
        exps[i] = q - 1;
        let power = ReducedPoly::reduce(field, m, [(exps, FElem::ONE)])?;
        acc = acc.mul(&one.sub(&power)?)?;
    }
    Ok(acc)
}

/// The first `n` elements in canonical order.
fn first_elements(n: usize) -> Vec<FElem> {
    (0..n as u32).map(FElem).collect()
}

/// Witness families for the third-weight upper bounds, one per parameter range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BoundBranch {
    /// q = 3, b = 1: `∏_{i<=a}(1 - x_i^2)`.
    B1Q3,
    /// q = 4, b = 1.
    B1Q4,
    /// q in {3, 4}, b = 1, a = m-1.
    B1Top,
    /// q >= 5, b = 1.
    B1,
    /// b-2 parallel hyperplanes and two more in a second direction.
    TwoLines,
    /// b-1 parallel hyperplanes.
    Parallel,
    /// Three independent hyperplanes.
    Cube,
    /// q = 3, b = 2: four independent hyperplanes.
    Q3B2,
}

impl BoundBranch {
    pub const ALL: [BoundBranch; 8] = [
        BoundBranch::B1Q3,
        BoundBranch::B1Q4,
        BoundBranch::B1Top,
        BoundBranch::B1,
        BoundBranch::TwoLines,
        BoundBranch::Parallel,
        BoundBranch::Cube,
        BoundBranch::Q3B2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundBranch::B1Q3 => "b1-q3",
            BoundBranch::B1Q4 => "b1-q4",
            BoundBranch::B1Top => "b1-top",
            BoundBranch::B1 => "b1",
            BoundBranch::TwoLines => "two-lines",
            BoundBranch::Parallel => "parallel",
            BoundBranch::Cube => "cube",
            BoundBranch::Q3B2 => "q3-b2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }

    /// Provenance tag of the bound this branch realizes.
    pub fn provenance(self) -> &'static str {
        match self {
            BoundBranch::B1Q3 => "thm:3hyp:b1q3",
            BoundBranch::B1Q4 => "thm:3hyp:b1q4",
            BoundBranch::B1Top => "thm:3hyp:b1top",
            BoundBranch::B1 => "thm:3hyp:b1",
            BoundBranch::TwoLines => "thm:3hyp",
            BoundBranch::Parallel => "thm:3hyp:line",
            BoundBranch::Cube => "thm:3hyp:b3",
            BoundBranch::Q3B2 => "thm:3hyp:q3b2",
        }
    }

    pub fn in_range(self, q: u32, m: u32, a: u32, b: u32) -> bool {
        let (q, m, a, b) = (q as i64, m as i64, a as i64, b as i64);
        match self {
            BoundBranch::B1Q3 => b == 1 && q == 3 && m >= 3 && 1 <= a && a <= m - 2,
            BoundBranch::B1Q4 => b == 1 && q == 4 && m >= 3 && 1 <= a && a <= m - 2,
            BoundBranch::B1Top => b == 1 && (q == 3 || q == 4) && m >= 2 && a == m - 1,
            BoundBranch::B1 => b == 1 && q >= 5 && 1 <= a && a <= m - 1,
            BoundBranch::TwoLines => q >= 5 && a <= m - 2 && 4 <= b && 2 * b <= q + 4,
            BoundBranch::Parallel => {
                (q >= 7 && a <= m - 2 && 2 * b >= q + 4 && b <= q - 1)
                    || (q >= 4 && a <= m - 2 && b == 2)
                    || (q >= 4 && m >= 2 && a == m - 2 && b == 3)
                    || (q == 3 && m >= 2 && (a == 0 || a == m - 2) && b == 2)
            }
            BoundBranch::Cube => q >= 4 && m >= 3 && a <= m - 3 && b == 3,
            BoundBranch::Q3B2 => q == 3 && m >= 4 && 1 <= a && a <= m - 3 && b == 2,
        }
    }

    pub fn claimed_weight(self, q: u32, m: u32, a: u32, b: u32) -> u64 {
        let (q, m, a, b) = (q as u64, m as i64, a as i64, b as u64);
        match self {
            BoundBranch::B1Q3 => ipow(3, m - a),
            BoundBranch::B1Q4 => 18 * ipow(4, m - a - 2),
            BoundBranch::B1Top => 2 * (q - 1),
            BoundBranch::B1 => 2 * (q - 2) * ipow(q, m - a - 1),
            BoundBranch::TwoLines => (q - 2) * (q - b + 2) * ipow(q, m - a - 2),
            BoundBranch::Parallel => (q - b + 1) * ipow(q, m - a - 1),
            BoundBranch::Cube => (q - 1).pow(3) * ipow(q, m - a - 3),
            BoundBranch::Q3B2 => 16 * ipow(3, m - a - 3),
        }
    }
}

impl fmt::Display for BoundBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A constructed codeword and the weight it is supposed to have.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub poly: ReducedPoly,
    pub claimed_weight: u64,
    pub family: String,
}

/// Builds the codeword realizing a third-weight bound branch.
pub fn build_bound_witness(
    field: &Arc<FieldSpec>,
    m: u32,
    a: u32,
    b: u32,
    branch: BoundBranch,
) -> Result<Witness, ConstructError> {
    let q = field.q();
    if !branch.in_range(q, m, a, b) {
        return Err(ConstructError::BranchRangeViolation(branch));
    }
    let (mu, au, bu, qu) = (m as usize, a as usize, b as usize, q as usize);
    let shifts = first_elements;
    // Variables are 0-based here: x_{i+1} is index i.
    let factors: Vec<ReducedPoly> = match branch {
        BoundBranch::B1Q3 => vec![zero_indicator(field, mu, au)?],
        BoundBranch::B1Q4 => vec![
            zero_indicator(field, mu, au - 1)?,
            vanishing(field, mu, au - 1, &shifts(2))?,
            vanishing(field, mu, au, &shifts(1))?,
            vanishing(field, mu, au + 1, &shifts(1))?,
        ],
        BoundBranch::B1Top => vec![
            zero_indicator(field, mu, mu - 2)?,
            vanishing(field, mu, mu - 2, &shifts(qu - 2))?,
            vanishing(field, mu, mu - 1, &shifts(1))?,
        ],
        BoundBranch::B1 => vec![
            zero_indicator(field, mu, au - 1)?,
            vanishing(field, mu, au - 1, &shifts(qu - 2))?,
            vanishing(field, mu, au, &shifts(2))?,
        ],
        BoundBranch::TwoLines => vec![
            zero_indicator(field, mu, au)?,
            vanishing(field, mu, au, &shifts(bu - 2))?,
            vanishing(field, mu, au + 1, &shifts(2))?,
        ],
        BoundBranch::Parallel => vec![zero_indicator(field, mu, au)?, vanishing(field, mu, au, &shifts(bu - 1))?],
        BoundBranch::Cube => vec![
            zero_indicator(field, mu, au)?,
            vanishing(field, mu, au, &shifts(1))?,
            vanishing(field, mu, au + 1, &shifts(1))?,
            vanishing(field, mu, au + 2, &shifts(1))?,
        ],
        BoundBranch::Q3B2 => {
            let mut list = vec![zero_indicator(field, mu, au - 1)?];
            for j in 0..4 {
                list.push(vanishing(field, mu, au - 1 + j, &shifts(1))?);
            }
            list
        }
    };
    let poly = ReducedPoly::product(field, mu, &factors)?;
    Ok(Witness { poly, claimed_weight: branch.claimed_weight(q, m, a, b), family: branch.name().to_string() })
}

/// Two-variable codeword families attaining c_b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TwoVarFamily {
    /// Three lines meeting pairwise in three points (b = 3).
    Triangle,
    /// b-2 parallel lines plus two more parallel lines.
    D,
    /// b-2 parallel lines plus two lines meeting on one of them.
    E,
    /// b-1 concurrent lines plus one parallel to the first.
    F,
    /// Two pairs of parallel lines and a diagonal of the rectangle (b = 5).
    Quad,
}

impl TwoVarFamily {
    pub const ALL: [TwoVarFamily; 5] =
        [TwoVarFamily::Triangle, TwoVarFamily::D, TwoVarFamily::E, TwoVarFamily::F, TwoVarFamily::Quad];

    pub fn name(self) -> &'static str {
        match self {
            TwoVarFamily::Triangle => "triangle",
            TwoVarFamily::D => "d",
            TwoVarFamily::E => "e",
            TwoVarFamily::F => "f",
            TwoVarFamily::Quad => "quad",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn in_range(self, q: u32, b: u32) -> bool {
        let general = match b {
            4 => q >= 9,
            5 => q >= 13,
            _ => b >= 6 && q >= 16 && 3 * b < q + 4,
        };
        match self {
            TwoVarFamily::Triangle => b == 3 && q >= 4,
            TwoVarFamily::D | TwoVarFamily::E | TwoVarFamily::F => general,
            TwoVarFamily::Quad => b == 5 && q >= 13,
        }
    }
}

impl fmt::Display for TwoVarFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Free parameters of a two-variable family. Directions are (a, b) pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyParams {
    Triangle { dirs: [(FElem, FElem); 3], c: FElem },
    D { xs: Vec<FElem>, c: FElem, d: FElem },
    E { dirs: [(FElem, FElem); 3], shifts: Vec<FElem> },
    F { dirs: Vec<(FElem, FElem)>, e: FElem },
    Quad { a: FElem, b: FElem, c: FElem, d: FElem },
}

/// Pairwise non-proportional directions: (1,0), (0,1), then (1,λ) for λ = 1, 2, ...
fn directions(n: usize) -> Vec<(FElem, FElem)> {
    let mut dirs = vec![(FElem::ONE, FElem::ZERO), (FElem::ZERO, FElem::ONE)];
    dirs.extend((1..).map(|l| (FElem::ONE, FElem(l))).take(n.saturating_sub(2)));
    dirs.truncate(n);
    dirs
}

impl FamilyParams {
    pub fn default_for(family: TwoVarFamily, b: u32) -> Self {
        let b = b as usize;
        let dirs = directions(b.max(3));
        match family {
            TwoVarFamily::Triangle => FamilyParams::Triangle { dirs: [dirs[0], dirs[1], dirs[2]], c: FElem::ONE },
            TwoVarFamily::D => FamilyParams::D { xs: first_elements(b - 2), c: FElem(0), d: FElem(1) },
            TwoVarFamily::E => {
                FamilyParams::E { dirs: [dirs[0], dirs[1], dirs[2]], shifts: (1..b as u32 - 2).map(FElem).collect() }
            }
            TwoVarFamily::F => FamilyParams::F { dirs: directions(b - 1), e: FElem::ONE },
            TwoVarFamily::Quad => FamilyParams::Quad { a: FElem(0), b: FElem(1), c: FElem(0), d: FElem(1) },
        }
    }

    fn family(&self) -> TwoVarFamily {
        match self {
            FamilyParams::Triangle { .. } => TwoVarFamily::Triangle,
            FamilyParams::D { .. } => TwoVarFamily::D,
            FamilyParams::E { .. } => TwoVarFamily::E,
            FamilyParams::F { .. } => TwoVarFamily::F,
            FamilyParams::Quad { .. } => TwoVarFamily::Quad,
        }
    }
}

fn side(msg: &str) -> ConstructError {
    ConstructError::ParamSideCondition(msg.to_string())
}

/// The lines `a x + b y + c = 0` of a family instance.
fn family_lines(field: &FieldSpec, b: usize, params: &FamilyParams) -> Result<Vec<Line2>, ConstructError> {
    let through = |(a, bb): (FElem, FElem), offset: FElem| Line2::new(field, a, bb, field.neg(offset));
    let lines = match params {
        FamilyParams::Triangle { dirs, c } => {
            if c.is_zero() {
                return Err(side("the third line must miss the origin"));
            }
            vec![through(dirs[0], FElem::ZERO)?, through(dirs[1], FElem::ZERO)?, through(dirs[2], *c)?]
        }
        FamilyParams::D { xs, c, d } => {
            if xs.len() + 2 != b {
                return Err(side("D needs b-2 vertical lines"));
            }
            let mut lines: Vec<Line2> = xs.iter().map(|&x| Line2::vertical(x)).collect();
            lines.push(Line2::horizontal(*c));
            lines.push(Line2::horizontal(*d));
            lines
        }
        FamilyParams::E { dirs, shifts } => {
            if shifts.len() + 3 != b || shifts.iter().any(|e| e.is_zero()) {
                return Err(side("E needs b-3 nonzero offsets"));
            }
            let mut lines = vec![];
            for &dir in dirs {
                lines.push(through(dir, FElem::ZERO)?);
            }
            for &e in shifts {
                lines.push(through(dirs[0], e)?);
            }
            lines
        }
        FamilyParams::F { dirs, e } => {
            if dirs.len() + 1 != b || e.is_zero() {
                return Err(side("F needs b-1 directions and a nonzero offset"));
            }
            let mut lines = vec![];
            for &dir in dirs {
                lines.push(through(dir, FElem::ZERO)?);
            }
            lines.push(through(dirs[0], *e)?);
            lines
        }
        FamilyParams::Quad { a, b: bb, c, d } => {
            if a == bb || c == d {
                return Err(side("the rectangle needs a != b and c != d"));
            }
            // (d-c) x + (a-b) y + bc - ad = 0
            let dx = field.sub(*d, *c);
            let dy = field.sub(*a, *bb);
            let offset = field.sub(field.mul(*bb, *c), field.mul(*a, *d));
            vec![
                Line2::vertical(*a),
                Line2::vertical(*bb),
                Line2::horizontal(*c),
                Line2::horizontal(*d),
                through((dx, dy), offset)?,
            ]
        }
    };
    if lines.iter().collect::<BTreeSet<_>>().len() != lines.len() {
        return Err(side("lines must be distinct"));
    }
    Ok(lines)
}

/// Builds a two-variable codeword of weight c_b and checks that weight.
pub fn build_third_weight_2var(
    field: &Arc<FieldSpec>,
    b: u32,
    family: TwoVarFamily,
    params: Option<FamilyParams>,
) -> Result<(ReducedPoly, Vec<Line2>), ConstructError> {
    let q = field.q();
    if !family.in_range(q, b) {
        return Err(ConstructError::FamilyRange { family, q, b });
    }
    let params = params.unwrap_or_else(|| FamilyParams::default_for(family, b));
    if params.family() != family {
        return Err(side("parameters belong to another family"));
    }
    let lines = family_lines(field, b as usize, &params)?;
    let factors: Vec<ReducedPoly> = lines.iter().map(|l| l.poly(field)).collect();
    let poly = ReducedPoly::product(field, 2, &factors)?;
    let claimed = cb_value(q, b)?.value.expect("c_b has a value");
    let measured = poly.weight()?;
    if measured != claimed {
        return Err(ConstructError::ParamSideCondition(format!("weight {measured} differs from c_b = {claimed}")));
    }
    Ok((poly, lines))
}

/// `∏_{i<a}(1 - x_{i+1}^{q-1}) · g(x_{a+1}, x_{a+2})`: weight |g| q^{m-a-2}, degree deg g + a(q-1).
pub fn lift_two_var(g: &ReducedPoly, m: usize, a: usize) -> Result<ReducedPoly, ConstructError> {
    if g.m() != 2 {
        return Err(PolyError::VariableCountMismatch { expected: 2, got: g.m() }.into());
    }
    if a + 2 > m {
        return Err(PolyError::VariableCountMismatch { expected: a + 2, got: m }.into());
    }
    Ok(zero_indicator(g.field(), m, a)?.mul(&embed(g, m, a)?)?)
}

/// Places a two-variable polynomial on coordinates `offset`, `offset + 1` of m.
fn embed(g: &ReducedPoly, m: usize, offset: usize) -> Result<ReducedPoly, PolyError> {
    let terms = g.terms().iter().map(|(mono, &c)| {
        let mut exps = vec![0u64; m];
        for (i, &e) in mono.0.iter().enumerate() {
            exps[offset + i] = e as u64;
        }
        (exps, c)
    });
    ReducedPoly::reduce(g.field(), m, terms)
}

/// `x^2 + βxy + γy^2 - 1` for the first irreducible `t^2 + βt + γ`: a norm form minus one,
/// which vanishes on exactly q+1 points.
pub fn norm_conic(field: &Arc<FieldSpec>) -> ReducedPoly {
    let (beta, gamma) = field
        .elements()
        .flat_map(|beta| field.elements().map(move |gamma| (beta, gamma)))
        .find(|&(beta, gamma)| {
            field.elements().all(|t| !field.add(field.add(field.mul(t, t), field.mul(beta, t)), gamma).is_zero())
        })
        .expect("an irreducible quadratic exists");
    let neg_one = field.neg(FElem::ONE);
    ReducedPoly::reduce(
        field,
        2,
        [(vec![2, 0], FElem::ONE), (vec![1, 1], beta), (vec![0, 2], gamma), (vec![0, 0], neg_one)],
    )
    .expect("two variables")
}

/// A codeword of R_q(a(q-1)+b, m) attaining the exact third weight.
pub fn build_third_weight(field: &Arc<FieldSpec>, m: u32, a: u32, b: u32) -> Result<Witness, ConstructError> {
    let q = field.q();
    let not_exact = ConstructError::NotExactCase { q, m, a, b };
    if b == 0 || b >= q || m < 2 {
        return Err(not_exact);
    }
    let params = decompose_r(q, m, a * (q - 1) + b)?;
    let answer = third_weight(&params);
    if !answer.is_exact() || params.a != a {
        return Err(not_exact);
    }
    let (mu, au) = (m as usize, a as usize);
    let prefix = zero_indicator(field, mu, au)?;
    let (tail, family) = if b == 3 && m - a >= 3 {
        let factors: Vec<ReducedPoly> = (au..au + 3).map(|i| ReducedPoly::var(field, mu, i)).collect();
        (ReducedPoly::product(field, mu, &factors)?, "cube".to_string())
    } else {
        let (g, family) = match b {
            2 => (norm_conic(field), "conic".to_string()),
            3 => (build_third_weight_2var(field, 3, TwoVarFamily::Triangle, None)?.0, "triangle".to_string()),
            _ => (build_third_weight_2var(field, b, TwoVarFamily::D, None)?.0, "d".to_string()),
        };
        (embed(&g, mu, au)?, family)
    };
    let poly = prefix.mul(&tail)?;
    Ok(Witness { poly, claimed_weight: answer.value.expect("exact"), family: format!("third:{family}") })
}

/// Weight predicted for an arrangement product.
pub fn arrangement_weight(q: u32, m: u32, ty: &ArrangementType) -> u64 {
    (q as u64).pow(m) - n_points(q, m, ty).expect("valid type")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::of_order(q).unwrap())
    }

    #[test]
    fn arrangement_products() {
        let f4 = field(4);
        let block = Block { form: LinearForm::Coordinate(0), shifts: vec![FElem(0), FElem(1), FElem(2)] };
        let (poly, ty) = build_arrangement_poly(&f4, 2, &[block]).unwrap();
        assert_eq!(poly.weight().unwrap(), 4);
        assert_eq!(arrangement_weight(4, 2, &ty), 4);

        let f5 = field(5);
        let blocks = [
            Block { form: LinearForm::Coordinate(0), shifts: vec![FElem(0)] },
            Block { form: LinearForm::Coordinate(1), shifts: vec![FElem(0)] },
        ];
        assert_eq!(build_arrangement_poly(&f5, 2, &blocks).unwrap().0.weight().unwrap(), 16);

        let f3 = field(3);
        let full = Block { form: LinearForm::Coordinate(0), shifts: vec![FElem(0), FElem(1), FElem(2)] };
        assert_eq!(build_arrangement_poly(&f3, 2, &[full]), Err(ConstructError::FullBlock));
        let repeated = Block { form: LinearForm::Coordinate(0), shifts: vec![FElem(1), FElem(1)] };
        assert_eq!(build_arrangement_poly(&f3, 2, &[repeated]), Err(ConstructError::RepeatedShift(FElem(1))));
        let dependent = [
            Block { form: LinearForm::Explicit(vec![FElem(1), FElem(1)]), shifts: vec![FElem(0)] },
            Block { form: LinearForm::Explicit(vec![FElem(2), FElem(2)]), shifts: vec![FElem(1)] },
        ];
        assert_eq!(build_arrangement_poly(&f3, 2, &dependent), Err(ConstructError::DependentForms));
    }

    #[test]
    fn bound_branch_examples() {
        let w = build_bound_witness(&field(5), 2, 0, 4, BoundBranch::TwoLines).unwrap();
        assert_eq!((w.poly.weight().unwrap(), w.claimed_weight), (9, 9));
        let w = build_bound_witness(&field(3), 3, 1, 1, BoundBranch::B1Q3).unwrap();
        assert_eq!((w.poly.weight().unwrap(), w.claimed_weight), (9, 9));
        let w = build_bound_witness(&field(4), 3, 1, 1, BoundBranch::B1Q4).unwrap();
        assert_eq!((w.poly.weight().unwrap(), w.claimed_weight), (18, 18));
        assert_eq!(
            build_bound_witness(&field(4), 3, 1, 1, BoundBranch::B1Q3),
            Err(ConstructError::BranchRangeViolation(BoundBranch::B1Q3))
        );
    }

    #[test]
    fn two_variable_examples() {
        let (p, _) = build_third_weight_2var(&field(4), 3, TwoVarFamily::Triangle, None).unwrap();
        assert_eq!(p.weight().unwrap(), 7);
        let (p, lines) = build_third_weight_2var(&field(9), 4, TwoVarFamily::D, None).unwrap();
        assert_eq!(p.weight().unwrap(), 49);
        assert_eq!(classify_line_configuration(&field(9), &lines).unwrap(), LineConfigTag::D);
        let (p, _) = build_third_weight_2var(&field(13), 5, TwoVarFamily::Quad, None).unwrap();
        assert_eq!(p.weight().unwrap(), 110);
        assert!(matches!(
            build_third_weight_2var(&field(7), 4, TwoVarFamily::D, None),
            Err(ConstructError::FamilyRange { .. })
        ));
        let bad = FamilyParams::Quad { a: FElem(1), b: FElem(1), c: FElem(0), d: FElem(1) };
        assert!(matches!(
            build_third_weight_2var(&field(13), 5, TwoVarFamily::Quad, Some(bad)),
            Err(ConstructError::ParamSideCondition(_))
        ));
    }

    #[test]
    fn lifted_examples() {
        let w = build_third_weight(&field(7), 5, 2, 3).unwrap();
        assert_eq!((w.poly.weight().unwrap(), w.claimed_weight), (216, 216));
        let w = build_third_weight(&field(4), 3, 1, 3);
        assert!(matches!(w, Err(ConstructError::NotExactCase { .. })));
        let w = build_third_weight(&field(5), 3, 1, 3).unwrap();
        assert_eq!((w.poly.weight().unwrap(), w.claimed_weight), (13, 13));
        let w = build_third_weight(&field(3), 2, 0, 2).unwrap();
        assert_eq!((w.poly.weight().unwrap(), w.claimed_weight), (5, 5));
    }

    #[test]
    fn classification_examples() {
        let f = field(7);
        let parallel: Vec<Line2> = (0..3).map(|c| Line2::vertical(FElem(c))).collect();
        assert_eq!(classify_line_configuration(&f, &parallel).unwrap(), LineConfigTag::A);
        let star = [
            Line2::vertical(FElem(0)),
            Line2::horizontal(FElem(0)),
            Line2::new(&f, FElem(1), FElem(1), FElem(0)).unwrap(),
        ];
        assert_eq!(classify_line_configuration(&f, &star).unwrap(), LineConfigTag::C);
        let f9 = field(9);
        let grid = [
            Line2::vertical(FElem(0)),
            Line2::vertical(FElem(1)),
            Line2::horizontal(FElem(0)),
            Line2::horizontal(FElem(1)),
        ];
        assert_eq!(classify_line_configuration(&f9, &grid).unwrap(), LineConfigTag::D);
        let dup = [Line2::vertical(FElem(0)), Line2::vertical(FElem(0)), Line2::vertical(FElem(1))];
        assert_eq!(classify_line_configuration(&f9, &dup), Err(ConstructError::DuplicateLine));
    }
}
