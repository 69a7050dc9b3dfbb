//! Reduced polynomials in m variables over F_q, i.e. functions F_q^m -> F_q.
//!
//! Every polynomial is kept in reduced form (each exponent at most q-1), so
//! equality of values is equality of functions. Truth tables list points in
//! lexicographic order with the last coordinate varying fastest.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FElem, FieldSpec, GfError};

/// Default cap on q^m for truth tables.
pub const DEFAULT_POINT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("expected {expected} variables, got {got}")]
    VariableCountMismatch { expected: usize, got: usize },
    #[error("truth table of {points} points exceeds budget {budget}")]
    SizeBudgetExceeded { points: u64, budget: u64 },
    #[error("field of order {0} is not supported here")]
    UnsupportedField(u32),
    #[error("cannot restrict a polynomial in a single variable")]
    SingleVariable,
    #[error("affine map matrix is singular")]
    SingularMatrix,
    #[error("polynomial does not vanish on the hyperplane x_1 = {0}")]
    DoesNotVanish(FElem),
    #[error("operands live over different fields or variable counts")]
    FieldMismatch,
    #[error("invalid polynomial: {0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Exponent vector; ordered lexicographically with x_1 most significant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// Total degree, with a sentinel below every finite degree for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

/// Folds an exponent into `0..q`: `x^v = x^{v-(q-1)}` for `v >= q`.
pub fn reduce_exponent(v: u64, q: u32) -> u32 {
    if v < q as u64 {
        v as u32
    } else {
        ((v - 1) % (q as u64 - 1) + 1) as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPoly {
    field: Arc<FieldSpec>,
    m: usize,
    terms: BTreeMap<Monomial, FElem>,
}

impl ReducedPoly {
    pub fn zero(field: &Arc<FieldSpec>, m: usize) -> Self {
        ReducedPoly { field: field.clone(), m, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Arc<FieldSpec>, m: usize, c: FElem) -> Self {
        let mut f = Self::zero(field, m);
        if !c.is_zero() {
            f.terms.insert(Monomial(vec![0; m]), c);
        }
        f
    }

    /// The coordinate function x_{i+1} (0-based index `i`).
    pub fn var(field: &Arc<FieldSpec>, m: usize, i: usize) -> Self {
        let mut exps = vec![0; m];
        exps[i] = 1;
        let mut f = Self::zero(field, m);
        f.terms.insert(Monomial(exps), FElem::ONE);
        f
    }

    /// `Σ coeffs[i] x_{i+1} + constant`.
    pub fn linear(field: &Arc<FieldSpec>, coeffs: &[FElem], constant: FElem) -> Self {
        let m = coeffs.len();
        let mut f = Self::constant(field, m, constant);
        for (i, &c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0; m];
                exps[i] = 1;
                f.terms.insert(Monomial(exps), c);
            }
        }
        f
    }

    /// Reduces an arbitrary list of terms: exponents are folded and like terms merged.
    pub fn reduce<I>(field: &Arc<FieldSpec>, m: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u64>, FElem)>,
    {
        let q = field.q();
        let mut f = Self::zero(field, m);
        for (exps, c) in terms {
            if exps.len() != m {
                return Err(PolyError::VariableCountMismatch { expected: m, got: exps.len() });
            }
            field.element(c.code())?;
            let mono = Monomial(exps.iter().map(|&v| reduce_exponent(v, q)).collect());
            f.add_term(mono, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, mono: Monomial, c: FElem) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = self.field.add(*o.get(), c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, FElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Degree {
        self.terms.keys().map(|mono| mono.degree()).max().map_or(Degree::NegInfinity, Degree::Finite)
    }

    pub fn coefficient(&self, exps: &[u32]) -> FElem {
        self.terms.get(&Monomial(exps.to_vec())).copied().unwrap_or(FElem::ZERO)
    }

    pub fn evaluate(&self, point: &[FElem]) -> Result<FElem, PolyError> {
        if point.len() != self.m {
            return Err(PolyError::VariableCountMismatch { expected: self.m, got: point.len() });
        }
        let f = &self.field;
        let mut acc = FElem::ZERO;
        for (mono, &c) in &self.terms {
            let mut term = c;
            for (&x, &k) in point.iter().zip(&mono.0) {
                term = f.mul(term, f.pow(x, k as u64));
            }
            acc = f.add(acc, term);
        }
        Ok(acc)
    }

    fn check_points(&self, budget: u64) -> Result<usize, PolyError> {
        let q = self.field.q();
        if q == 2 {
            return Err(PolyError::UnsupportedField(q));
        }
        let points = (q as u64).checked_pow(self.m as u32).unwrap_or(u64::MAX);
        if points > budget {
            return Err(PolyError::SizeBudgetExceeded { points, budget });
        }
        Ok(points as usize)
    }

    pub fn truth_table(&self) -> Result<Vec<FElem>, PolyError> {
        self.truth_table_within(DEFAULT_POINT_BUDGET)
    }

    /// Evaluates at all q^m points by a separable transform along each axis.
    pub fn truth_table_within(&self, budget: u64) -> Result<Vec<FElem>, PolyError> {
        let n = self.check_points(budget)?;
        let q = self.field.q() as usize;
        let mut values = vec![FElem::ZERO; n];
        for (mono, &c) in &self.terms {
            let idx = mono.0.iter().fold(0usize, |acc, &k| acc * q + k as usize);
            values[idx] = c;
        }
        // powers[x][k] = x^k
        let powers: Vec<Vec<FElem>> =
            self.field.elements().map(|x| (0..q).map(|k| self.field.pow(x, k as u64)).collect()).collect();
        transform_axes(&self.field, &mut values, self.m, |x, k| powers[x][k]);
        Ok(values)
    }

    /// Recovers the reduced polynomial of a function given by its truth table.
    pub fn interpolate(field: &Arc<FieldSpec>, m: usize, values: &[FElem]) -> Result<Self, PolyError> {
        let q = field.q() as usize;
        let expected = q.checked_pow(m as u32).unwrap_or(usize::MAX);
        if values.len() != expected {
            return Err(PolyError::Invalid(format!("expected {expected} values, got {}", values.len())));
        }
        // c_0 = g(0); c_k = -Σ_x g(x) x^{q-1-k} for k >= 1, with 0^0 = 1.
        let weights: Vec<Vec<FElem>> = (0..q)
            .map(|k| {
                field
                    .elements()
                    .map(|x| {
                        if k == 0 {
                            if x.is_zero() {
                                FElem::ONE
                            } else {
                                FElem::ZERO
                            }
                        } else {
                            field.neg(field.pow(x, (q - 1 - k) as u64))
                        }
                    })
                    .collect()
            })
            .collect();
        let mut coeffs = values.to_vec();
        transform_axes(field, &mut coeffs, m, |k, x| weights[k][x]);
        let mut f = Self::zero(field, m);
        for (idx, &c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0u32; m];
                let mut rest = idx;
                for slot in exps.iter_mut().rev() {
                    *slot = (rest % q) as u32;
                    rest /= q;
                }
                f.terms.insert(Monomial(exps), c);
            }
        }
        Ok(f)
    }

    pub fn weight(&self) -> Result<u64, PolyError> {
        self.weight_within(DEFAULT_POINT_BUDGET)
    }

    pub fn weight_within(&self, budget: u64) -> Result<u64, PolyError> {
        Ok(self.truth_table_within(budget)?.iter().filter(|v| !v.is_zero()).count() as u64)
    }

    /// Substitutes `x_1 = lambda`, leaving a polynomial in the other m-1 variables.
    pub fn restrict(&self, lambda: FElem) -> Result<Self, PolyError> {
        if self.m < 2 {
            return Err(PolyError::SingleVariable);
        }
        let f = &self.field;
        let mut out = Self::zero(f, self.m - 1);
        for (mono, &c) in &self.terms {
            let coeff = f.mul(c, f.pow(lambda, mono.0[0] as u64));
            out.add_term(Monomial(mono.0[1..].to_vec()), coeff);
        }
        Ok(out)
    }

    /// Returns `g` with `f = (x_1 - w) g`, provided `f` vanishes on `x_1 = w`.
    pub fn factor_hyperplane(&self, w: FElem) -> Result<Self, PolyError> {
        let f = &self.field;
        // Slices F_k of f by the exponent of x_1.
        let q = f.q() as usize;
        let mut slices: Vec<BTreeMap<Vec<u32>, FElem>> = vec![BTreeMap::new(); q];
        for (mono, &c) in &self.terms {
            slices[mono.0[0] as usize].insert(mono.0[1..].to_vec(), c);
        }
        // Synthetic division: g_{k-1} = F_k + w g_k, remainder F_0 + w g_0.
        let mut out = Self::zero(f, self.m);
        let mut carry: BTreeMap<Vec<u32>, FElem> = BTreeMap::new();
        for k in (1..q).rev() {
            let mut next = slices[k].clone();
            for (rest, &c) in &carry {
                let entry = next.entry(rest.clone()).or_insert(FElem::ZERO);
                *entry = f.add(*entry, f.mul(w, c));
            }
            next.retain(|_, c| !c.is_zero());
            for (rest, &c) in &next {
                let mut exps = vec![k as u32 - 1];
                exps.extend_from_slice(rest);
                out.terms.insert(Monomial(exps), c);
            }
            carry = next;
        }
        let mut remainder = slices[0].clone();
        for (rest, &c) in &carry {
            let entry = remainder.entry(rest.clone()).or_insert(FElem::ZERO);
            *entry = f.add(*entry, f.mul(w, c));
        }
        if remainder.values().any(|c| !c.is_zero()) {
            return Err(PolyError::DoesNotVanish(w));
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.m != other.m || self.field != other.field {
            return Err(PolyError::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (mono, &c) in &other.terms {
            out.add_term(mono.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(FElem::ONE))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, lambda: FElem) -> Self {
        let mut out = Self::zero(&self.field, self.m);
        if lambda.is_zero() {
            return out;
        }
        for (mono, &c) in &self.terms {
            out.terms.insert(mono.clone(), self.field.mul(c, lambda));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let q = self.field.q();
        let mut out = Self::zero(&self.field, self.m);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let exps = ma.0.iter().zip(&mb.0).map(|(&x, &y)| reduce_exponent(x as u64 + y as u64, q)).collect();
                out.add_term(Monomial(exps), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// Product of a sequence of polynomials over the same ring.
    pub fn product<'a, I>(field: &Arc<FieldSpec>, m: usize, factors: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = &'a ReducedPoly>,
    {
        let mut acc = Self::constant(field, m, FElem::ONE);
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    /// `x -> f(Mx + s)`, computed symbolically.
    pub fn compose_affine(&self, map: &AffineMap) -> Result<Self, PolyError> {
        if map.dim() != self.m {
            return Err(PolyError::VariableCountMismatch { expected: self.m, got: map.dim() });
        }
        let f = &self.field;
        let q = f.q() as usize;
        // powers[i][k] = (row_i . x + s_i)^k
        let mut powers: Vec<Vec<ReducedPoly>> = Vec::with_capacity(self.m);
        for i in 0..self.m {
            let row = Self::linear(f, &map.matrix[i], map.shift[i]);
            let mut list = vec![Self::constant(f, self.m, FElem::ONE)];
            for k in 1..q {
                let next = list[k - 1].mul(&row)?;
                list.push(next);
            }
            powers.push(list);
        }
        let mut out = Self::zero(f, self.m);
        for (mono, &c) in &self.terms {
            let mut term = Self::constant(f, self.m, c);
            for (i, &k) in mono.0.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&powers[i][k as usize])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            p: self.field.p(),
            e: self.field.e(),
            modulus: self.field.modulus().to_vec(),
            m: self.m,
            terms: self.terms.iter().map(|(mono, c)| TermJson { exps: mono.0.clone(), coeff: c.code() }).collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("polynomial JSON serializes")
    }

    /// Parses the JSON form, rejecting anything that is not already canonical.
    pub fn from_json(json: &PolyJson) -> Result<Self, PolyError> {
        let field = Arc::new(FieldSpec::new(json.p, json.e, Some(json.modulus.clone()))?);
        let q = field.q();
        let mut f = Self::zero(&field, json.m);
        let mut previous: Option<&Vec<u32>> = None;
        for term in &json.terms {
            if term.exps.len() != json.m {
                return Err(PolyError::VariableCountMismatch { expected: json.m, got: term.exps.len() });
            }
            if term.exps.iter().any(|&v| v >= q) {
                return Err(PolyError::Invalid(format!("unreduced exponents {:?}", term.exps)));
            }
            if term.coeff == 0 || term.coeff >= q {
                return Err(PolyError::Invalid(format!("coefficient {} out of range", term.coeff)));
            }
            if previous.is_some_and(|prev| prev >= &term.exps) {
                return Err(PolyError::Invalid("terms out of order or repeated".into()));
            }
            previous = Some(&term.exps);
            f.terms.insert(Monomial(term.exps.clone()), FElem(term.coeff));
        }
        Ok(f)
    }

    pub fn from_json_str(text: &str) -> Result<Self, PolyError> {
        let json: PolyJson = serde_json::from_str(text).map_err(|e| PolyError::Invalid(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// Applies a q x q matrix along every axis of a q^m array (last axis fastest).
fn transform_axes<F>(field: &FieldSpec, data: &mut [FElem], m: usize, matrix: F)
where
    F: Fn(usize, usize) -> FElem,
{
    let q = field.q() as usize;
    let table: Vec<FElem> = (0..q * q).map(|i| matrix(i / q, i % q)).collect();
    let mut fiber_in = vec![FElem::ZERO; q];
    let mut stride = 1;
    for _ in 0..m {
        let block = stride * q;
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                for (k, slot) in fiber_in.iter_mut().enumerate() {
                    *slot = data[base + offset + k * stride];
                }
                for row in 0..q {
                    let mut acc = FElem::ZERO;
                    for (col, &v) in fiber_in.iter().enumerate() {
                        if !v.is_zero() {
                            acc = field.add(acc, field.mul(table[row * q + col], v));
                        }
                    }
                    data[base + offset + row * stride] = acc;
                }
            }
        }
        stride = block;
    }
}

/// Serialized polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
    pub m: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: u32,
}

/// An invertible affine map `x -> Mx + s` of F_q^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    matrix: Vec<Vec<FElem>>,
    shift: Vec<FElem>,
}

impl AffineMap {
    pub fn new(field: &FieldSpec, matrix: Vec<Vec<FElem>>, shift: Vec<FElem>) -> Result<Self, PolyError> {
        let m = shift.len();
        if matrix.len() != m || matrix.iter().any(|row| row.len() != m) {
            return Err(PolyError::VariableCountMismatch { expected: m, got: matrix.len() });
        }
        if rank(field, matrix.clone()) < m {
            return Err(PolyError::SingularMatrix);
        }
        Ok(AffineMap { matrix, shift })
    }

    pub fn identity(m: usize) -> Self {
        let matrix = (0..m).map(|i| (0..m).map(|j| if i == j { FElem::ONE } else { FElem::ZERO }).collect()).collect();
        AffineMap { matrix, shift: vec![FElem::ZERO; m] }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn matrix(&self) -> &[Vec<FElem>] {
        &self.matrix
    }

    pub fn shift(&self) -> &[FElem] {
        &self.shift
    }

    pub fn apply(&self, field: &FieldSpec, x: &[FElem]) -> Vec<FElem> {
        self.matrix
            .iter()
            .zip(&self.shift)
            .map(|(row, &s)| row.iter().zip(x).fold(s, |acc, (&a, &v)| field.add(acc, field.mul(a, v))))
            .collect()
    }
}

/// Row rank over the field by Gaussian elimination.
pub fn rank(field: &FieldSpec, mut rows: Vec<Vec<FElem>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]).expect("pivot is nonzero");
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = field.mul(rows[r][col], inv);
                for c in col..cols {
                    let sub = field.mul(factor, rows[rank][c]);
                    rows[r][c] = field.sub(rows[r][c], sub);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Iterates all points of F_q^m in canonical order.
pub fn points(q: u32, m: usize) -> impl Iterator<Item = Vec<FElem>> {
    let total = (q as u64).pow(m as u32);
    (0..total).map(move |mut idx| {
        let mut point = vec![FElem::ZERO; m];
        for slot in point.iter_mut().rev() {
            *slot = FElem((idx % q as u64) as u32);
            idx /= q as u64;
        }
        point
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::of_order(q).unwrap())
    }

    #[test]
    fn evaluate_product_of_shifts() {
        let f5 = field(5);
        let x = ReducedPoly::var(&f5, 1, 0);
        let one = ReducedPoly::constant(&f5, 1, FElem(1));
        let two = ReducedPoly::constant(&f5, 1, FElem(2));
        let g = x.sub(&one).unwrap().mul(&x.sub(&two).unwrap()).unwrap();
        assert_eq!(g.evaluate(&[FElem(3)]).unwrap(), FElem(2));
    }

    #[test]
    fn exponent_reduction() {
        let f3 = field(3);
        let x = ReducedPoly::var(&f3, 1, 0);
        let x2 = x.mul(&x).unwrap();
        assert_eq!(x2.mul(&x2).unwrap(), x2);
        let raw = ReducedPoly::reduce(&f3, 1, [(vec![4u64], FElem(1))]).unwrap();
        assert_eq!(raw, x2);
        assert_eq!(reduce_exponent(7, 4), 1);
        assert_eq!(reduce_exponent(6, 4), 3);
    }

    #[test]
    fn reduce_rejects_wrong_arity() {
        let f3 = field(3);
        assert_eq!(
            ReducedPoly::reduce(&f3, 2, [(vec![1u64], FElem(1))]).unwrap_err(),
            PolyError::VariableCountMismatch { expected: 2, got: 1 }
        );
    }

    #[test]
    fn zero_degree_sentinel() {
        let f3 = field(3);
        assert_eq!(ReducedPoly::zero(&f3, 2).degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
    }

    #[test]
    fn restriction_example() {
        let f3 = field(3);
        let x1 = ReducedPoly::var(&f3, 2, 0);
        let x2 = ReducedPoly::var(&f3, 2, 1);
        let one = ReducedPoly::constant(&f3, 2, FElem(1));
        let f = one.sub(&x1.mul(&x1).unwrap()).unwrap().mul(&x2).unwrap();
        assert_eq!(f.restrict(FElem(0)).unwrap(), ReducedPoly::var(&f3, 1, 0));
        assert!(f.restrict(FElem(1)).unwrap().is_zero());
        assert_eq!(ReducedPoly::var(&f3, 1, 0).restrict(FElem(0)), Err(PolyError::SingleVariable));
    }

    #[test]
    fn truth_table_rejects_binary_field_and_budget() {
        let f2 = field(2);
        assert_eq!(ReducedPoly::zero(&f2, 2).truth_table(), Err(PolyError::UnsupportedField(2)));
        let f3 = field(3);
        assert!(matches!(
            ReducedPoly::zero(&f3, 4).truth_table_within(80),
            Err(PolyError::SizeBudgetExceeded { points: 81, budget: 80 })
        ));
    }

    #[test]
    fn truth_table_agrees_with_pointwise_evaluation() {
        let f4 = field(4);
        let f = ReducedPoly::reduce(&f4, 2, [(vec![3, 1], FElem(2)), (vec![1, 2], FElem(3)), (vec![0, 0], FElem(1))])
            .unwrap();
        let table = f.truth_table().unwrap();
        for (idx, point) in points(4, 2).enumerate() {
            assert_eq!(table[idx], f.evaluate(&point).unwrap());
        }
        assert_eq!(ReducedPoly::interpolate(&f4, 2, &table).unwrap(), f);
    }

    #[test]
    fn truth_table_is_a_bijection_at_q3() {
        let f3 = field(3);
        for m in 1..=2usize {
            let n = 3usize.pow(m as u32);
            let total = 3u64.pow(n as u32);
            let mut seen = std::collections::HashSet::new();
            for code in 0..total {
                let mut rest = code;
                let values: Vec<FElem> = (0..n)
                    .map(|_| {
                        let v = FElem((rest % 3) as u32);
                        rest /= 3;
                        v
                    })
                    .collect();
                let f = ReducedPoly::interpolate(&f3, m, &values).unwrap();
                assert_eq!(f.truth_table().unwrap(), values);
                assert!(seen.insert(f.to_json_string()));
            }
        }
    }

    #[test]
    fn factor_hyperplane_round_trip() {
        let f5 = field(5);
        let x1 = ReducedPoly::var(&f5, 2, 0);
        let x2 = ReducedPoly::var(&f5, 2, 1);
        let shift = ReducedPoly::constant(&f5, 2, FElem(3));
        let g = x1.mul(&x2).unwrap().add(&x2.mul(&x2).unwrap()).unwrap();
        let f = x1.sub(&shift).unwrap().mul(&g).unwrap();
        assert_eq!(f.factor_hyperplane(FElem(3)).unwrap(), g);
        assert_eq!(f.factor_hyperplane(FElem(1)), Err(PolyError::DoesNotVanish(FElem(1))));
    }

    #[test]
    fn singular_affine_map() {
        let f3 = field(3);
        let m = vec![vec![FElem(1), FElem(2)], vec![FElem(2), FElem(1)]];
        assert_eq!(AffineMap::new(&f3, m, vec![FElem(0); 2]), Err(PolyError::SingularMatrix));
    }

    #[test]
    fn compose_matches_pointwise() {
        let f5 = field(5);
        let f = ReducedPoly::reduce(&f5, 2, [(vec![2, 1], FElem(1)), (vec![0, 3], FElem(4))]).unwrap();
        let map =
            AffineMap::new(&f5, vec![vec![FElem(1), FElem(2)], vec![FElem(0), FElem(3)]], vec![FElem(4), FElem(1)])
                .unwrap();
        let g = f.compose_affine(&map).unwrap();
        for point in points(5, 2) {
            let image = map.apply(&f5, &point);
            assert_eq!(g.evaluate(&point).unwrap(), f.evaluate(&image).unwrap());
        }
        assert_eq!(g.weight().unwrap(), f.weight().unwrap());
    }

    #[test]
    fn field_mismatch() {
        let a = ReducedPoly::var(&field(3), 2, 0);
        let b = ReducedPoly::var(&field(5), 2, 0);
        assert_eq!(a.add(&b), Err(PolyError::FieldMismatch));
        let c = ReducedPoly::var(&field(3), 3, 0);
        assert_eq!(a.mul(&c), Err(PolyError::FieldMismatch));
    }

    #[test]
    fn json_round_trip_and_format() {
        let f9 = field(9);
        let f = ReducedPoly::reduce(&f9, 2, [(vec![1, 0], FElem(5)), (vec![0, 9], FElem(3))]).unwrap();
        let text = f.to_json_string();
        assert_eq!(
            text,
            r#"{"p":3,"e":2,"modulus":[1,0,1],"m":2,"terms":[{"exps":[0,1],"coeff":3},{"exps":[1,0],"coeff":5}]}"#
        );
        let back = ReducedPoly::from_json_str(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json_string(), text);
        let bad = text.replace("\"coeff\":3", "\"coeff\":9");
        assert!(ReducedPoly::from_json_str(&bad).is_err());
    }
}
