//! Closed-form weights of R_q(r, m) and the quadratic weight classifier.
//!
//! Every answer carries a status and a short provenance tag naming the
//! result it comes from; the tags are listed in the README.

use serde::Serialize;
use thiserror::Error;

use crate::gf::{prime_power, FElem, FieldSpec};
use crate::ipow;
use crate::polyring::{Degree, PolyError, ReducedPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrmError {
    #[error("r = {r} is outside 1..=m(q-1) for q = {q}, m = {m}")]
    OutOfRangeR { q: u32, m: u32, r: u32 },
    #[error("field of order {0} is not supported")]
    UnsupportedField(u32),
    #[error("q^m does not fit the integer range")]
    TooLarge,
    #[error("no listed case covers {0}")]
    UncoveredCase(String),
    #[error("b = {b} is outside 2..=q-1 for q = {q}")]
    OutOfRangeB { q: u32, b: u32 },
    #[error("polynomial has degree above 2")]
    NotQuadratic,
    #[error("quadratic classification needs odd characteristic")]
    EvenCharacteristic,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Code parameters with both decompositions of r.
///
/// `r = a(q-1) + b` with `1 <= b <= q-1`, and `r = t(q-1) + s` with `0 <= s <= q-2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub q: u32,
    pub m: u32,
    pub r: u32,
    pub a: u32,
    pub b: u32,
    pub t: u32,
    pub s: u32,
}

impl CodeParams {
    pub fn length(&self) -> u64 {
        ipow(self.q as u64, self.m as i64)
    }

    fn qi(&self) -> u64 {
        self.q as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Exact,
    BoundOnly,
    Undefined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightAnswer {
    pub value: Option<u64>,
    pub status: Status,
    pub provenance: String,
}

impl WeightAnswer {
    fn exact(value: u64, provenance: impl Into<String>) -> Self {
        WeightAnswer { value: Some(value), status: Status::Exact, provenance: provenance.into() }
    }

    fn bound(value: u64, provenance: impl Into<String>) -> Self {
        WeightAnswer { value: Some(value), status: Status::BoundOnly, provenance: provenance.into() }
    }

    fn undefined(provenance: impl Into<String>) -> Self {
        WeightAnswer { value: None, status: Status::Undefined, provenance: provenance.into() }
    }

    pub fn is_exact(&self) -> bool {
        self.status == Status::Exact
    }
}

/// Splits r both ways.
pub fn decompose_r(q: u32, m: u32, r: u32) -> Result<CodeParams, GrmError> {
    if q == 2 || prime_power(q as u64).is_none() {
        return Err(GrmError::UnsupportedField(q));
    }
    if m == 0 || r == 0 || r > m * (q - 1) {
        return Err(GrmError::OutOfRangeR { q, m, r });
    }
    if (q as u64).checked_pow(m).is_none() {
        return Err(GrmError::TooLarge);
    }
    let a = (r - 1) / (q - 1);
    let b = r - a * (q - 1);
    let (t, s) = if b == q - 1 { (a + 1, 0) } else { (a, b) };
    Ok(CodeParams { q, m, r, a, b, t, s })
}

pub fn min_weight(params: &CodeParams) -> WeightAnswer {
    let (q, m, a, b) = (params.qi(), params.m as i64, params.a as i64, params.b as u64);
    WeightAnswer::exact((q - b) * ipow(q, m - a - 1), "intro:min")
}

/// q^m minus the point count of the second-weight arrangement.
pub fn second_weight(params: &CodeParams) -> Result<WeightAnswer, GrmError> {
    let (q, m, t, s) = (params.qi(), params.m as i64, params.t as i64, params.s as u64);
    let value = if q >= 4 {
        if (2..=q - 2).contains(&s) && t <= m - 2 {
            (q - s + 1) * (q - 1) * ipow(q, m - t - 2)
        } else if s == 1 && t <= m - 1 {
            ipow(q, m - t)
        } else if s == 0 && 1 <= t && t <= m - 1 {
            2 * (q - 1) * ipow(q, m - t - 1)
        } else {
            return Err(uncovered(params));
        }
    } else if s == 0 && 1 <= t && t <= m - 1 {
        4 * ipow(3, m - t - 1)
    } else if s == 1 && 1 <= t && t <= m - 2 {
        8 * ipow(3, m - t - 2)
    } else if s == 1 && t == m - 1 && t >= 1 {
        3
    } else {
        return Err(uncovered(params));
    };
    Ok(WeightAnswer::exact(value, "app:second"))
}

fn uncovered(params: &CodeParams) -> GrmError {
    GrmError::UncoveredCase(format!("q={} m={} r={}", params.q, params.m, params.r))
}

/// The third weight of the two-variable code R_q(b, 2), exact where known.
pub fn cb_value(q: u32, b: u32) -> Result<WeightAnswer, GrmError> {
    if q < 3 || b < 2 || b > q - 1 {
        return Err(GrmError::OutOfRangeB { q, b });
    }
    let (qi, bi) = (q as u64, b as u64);
    let answer = match b {
        2 => WeightAnswer::exact(qi * qi - qi - 1, "lem:r2"),
        3 if q >= 4 => WeightAnswer::exact(qi * qi - 3 * qi + 3, "lem:c3"),
        4 if q >= 9 => WeightAnswer::exact((qi - 2) * (qi - 2), "prop:c4"),
        5 if q >= 13 => WeightAnswer::exact((qi - 3) * (qi - 2), "prop:c5"),
        _ if b >= 6 && q >= 16 && 3 * b < q + 4 => WeightAnswer::exact((qi - bi + 2) * (qi - 2), "thm:cb"),
        _ if q >= 5 && 4 <= b && 2 * b <= q + 4 => WeightAnswer::bound((qi - 2) * (qi - bi + 2), "thm:3hyp"),
        _ => WeightAnswer::bound((qi - bi + 1) * qi, "thm:3hyp:line"),
    };
    Ok(answer)
}

/// Third weight: exact where a closed form is known, otherwise an upper bound.
pub fn third_weight(params: &CodeParams) -> WeightAnswer {
    let (q, m, a, b) = (params.qi(), params.m as i64, params.a as i64, params.b as u64);
    if params.r == 1 {
        return WeightAnswer::undefined("affine:two-weights");
    }
    if m < 2 {
        return WeightAnswer::undefined("uncovered");
    }
    let c2 = q * q - q - 1;
    if b == 2 && a == 0 {
        return WeightAnswer::exact(c2 * ipow(q, m - 2), "lem:r2");
    }
    if b == 2 && a >= 1 && a <= m - 2 && q >= 5 {
        return WeightAnswer::exact(c2 * ipow(q, m - a - 2), "thm:w3+lem:r2|cb<(q-b+1)q");
    }
    if b == 3 && m - a >= 3 && q >= 5 {
        let tag = if q >= 7 { "thm:w33" } else { "thm:w33|prop:q>=7-unmet" };
        return WeightAnswer::exact((q - 1).pow(3) * ipow(q, m - a - 3), tag);
    }
    if b == 3 && m - a == 2 && ((a == 0 && q >= 4) || (a >= 1 && q >= 5)) {
        let c3 = q * q - 3 * q + 3;
        let tag = if a == 0 { "lem:c3" } else { "thm:w3+lem:c3|cb<(q-b+1)q-1" };
        return WeightAnswer::exact(c3, tag);
    }
    if (4..=q.saturating_sub(2)).contains(&b) && a <= m - 2 && q >= 5 {
        let cb = cb_value(params.q, params.b).expect("b in range");
        let limit = (q - b + 1) * q;
        let cb_value = cb.value.expect("cb has a value");
        if cb.is_exact() && cb_value < limit {
            let ineq = if cb_value < limit - 1 { "cb<(q-b+1)q-1" } else { "cb<(q-b+1)q" };
            return WeightAnswer::exact(cb_value * ipow(q, m - a - 2), format!("thm:w3+{}|{ineq}", cb.provenance));
        }
    }
    third_weight_bound(params)
}

/// The upper bounds realized by explicit codewords, one per listed range.
pub fn third_weight_bound(params: &CodeParams) -> WeightAnswer {
    let (q, m, a, b) = (params.qi(), params.m as i64, params.a as i64, params.b as u64);
    if b == 1 {
        if q == 3 && m >= 3 && 1 <= a && a <= m - 2 {
            return WeightAnswer::bound(ipow(3, m - a), "thm:3hyp:b1q3");
        }
        if q == 4 && m >= 3 && 1 <= a && a <= m - 2 {
            return WeightAnswer::bound(18 * ipow(4, m - a - 2), "thm:3hyp:b1q4");
        }
        if (q == 3 || q == 4) && a == m - 1 && a >= 1 {
            return WeightAnswer::bound(2 * (q - 1), "thm:3hyp:b1top");
        }
        if q >= 5 && 1 <= a && a <= m - 1 {
            return WeightAnswer::bound(2 * (q - 2) * ipow(q, m - a - 1), "thm:3hyp:b1");
        }
        return WeightAnswer::undefined("uncovered");
    }
    if q >= 5 && a <= m - 2 && 4 <= b && 2 * b <= q + 4 {
        return WeightAnswer::bound((q - 2) * (q - b + 2) * ipow(q, m - a - 2), "thm:3hyp");
    }
    let line = (q >= 7 && a <= m - 2 && 2 * b >= q + 4 && b <= q - 1)
        || (q >= 4 && a <= m - 2 && b == 2)
        || (q >= 4 && a == m - 2 && b == 3)
        || (q == 3 && (a == 0 || a == m - 2) && b == 2);
    if line {
        return WeightAnswer::bound((q - b + 1) * ipow(q, m - a - 1), "thm:3hyp:line");
    }
    if q >= 4 && m >= 3 && a <= m - 3 && b == 3 {
        return WeightAnswer::bound((q - 1).pow(3) * ipow(q, m - a - 3), "thm:3hyp:b3");
    }
    if q == 3 && m >= 4 && 1 <= a && a <= m - 3 && b == 2 {
        return WeightAnswer::bound(16 * ipow(3, m - a - 3), "thm:3hyp:q3b2");
    }
    WeightAnswer::undefined("uncovered")
}

/// Rank and type markers of a quadratic function and its homogenization.
///
/// A type marker is 1 for odd rank; for even rank it is 2 when the form is
/// hyperbolic and 0 when it is elliptic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticClassification {
    pub r0: u32,
    pub w0: u8,
    #[serde(rename = "R")]
    pub rank_homogenized: u32,
    pub w: u8,
}

/// Weight of a polynomial of degree at most 2 from its quadratic-form invariants.
pub fn quadratic_weight(f: &ReducedPoly) -> Result<(QuadraticClassification, u64), GrmError> {
    let field = f.field();
    if field.p() == 2 {
        return Err(GrmError::EvenCharacteristic);
    }
    if matches!(f.degree(), Degree::Finite(d) if d > 2) {
        return Err(GrmError::NotQuadratic);
    }
    let m = f.m();
    let half = field.inv(field.from_int(2)).expect("odd characteristic");
    // Symmetric matrix of Q(x, z) = q0(x) + (linear part) z + (constant) z^2; z is index m.
    let mut matrix = vec![vec![FElem::ZERO; m + 1]; m + 1];
    for (mono, &c) in f.terms() {
        let support: Vec<usize> = (0..m).filter(|&i| mono.0[i] > 0).collect();
        match (mono.degree(), support.as_slice()) {
            (0, _) => matrix[m][m] = c,
            (1, &[i]) => {
                matrix[i][m] = field.mul(c, half);
                matrix[m][i] = matrix[i][m];
            }
            (2, &[i]) => matrix[i][i] = c,
            (2, &[i, j]) => {
                matrix[i][j] = field.mul(c, half);
                matrix[j][i] = matrix[i][j];
            }
            _ => unreachable!("degree at most two"),
        }
    }
    let affine_part: Vec<Vec<FElem>> = matrix[..m].iter().map(|row| row[..m].to_vec()).collect();
    let (r0, w0) = form_invariants(field, affine_part);
    let (big_r, w) = form_invariants(field, matrix);
    let (q, mi) = (field.q() as i64, m as i64);
    let mut weight = (q - 1) * q.pow((mi - 1) as u32);
    if w0 != 1 {
        weight += (w0 as i64 - 1) * q.pow((mi - r0 as i64 / 2 - 1) as u32);
    }
    if w != 1 {
        weight -= (w as i64 - 1) * q.pow((mi - big_r as i64 / 2) as u32);
    }
    let class = QuadraticClassification { r0, w0, rank_homogenized: big_r, w };
    Ok((class, weight as u64))
}

/// Rank and type marker of a symmetric matrix over an odd-characteristic field.
fn form_invariants(field: &FieldSpec, matrix: Vec<Vec<FElem>>) -> (u32, u8) {
    let diagonal = diagonalize_symmetric(field, matrix);
    let rank = diagonal.len() as u32;
    if rank % 2 == 1 {
        return (rank, 1);
    }
    let mut disc = diagonal.iter().fold(FElem::ONE, |acc, &d| field.mul(acc, d));
    if (rank / 2) % 2 == 1 {
        disc = field.neg(disc);
    }
    (rank, if field.is_square(disc) { 2 } else { 0 })
}

/// Nonzero diagonal entries of a congruent diagonal form.
fn diagonalize_symmetric(field: &FieldSpec, mut a: Vec<Vec<FElem>>) -> Vec<FElem> {
    let n = a.len();
    let mut diagonal = Vec::new();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(i) => i,
            None => {
                let Some((i, j)) =
                    (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
                else {
                    break;
                };
                // Row and column j added to i; the new a[i][i] is 2 a[i][j].
                for c in 0..n {
                    a[i][c] = field.add(a[i][c], a[j][c]);
                }
                for r in 0..n {
                    a[r][i] = field.add(a[r][i], a[r][j]);
                }
                i
            }
        };
        a.swap(k, pivot);
        for row in a.iter_mut() {
            row.swap(k, pivot);
        }
        let d = a[k][k];
        let inv = field.inv(d).expect("pivot is nonzero");
        for i in k + 1..n {
            let factor = field.mul(a[i][k], inv);
            if factor.is_zero() {
                continue;
            }
            for c in 0..n {
                let sub = field.mul(factor, a[k][c]);
                a[i][c] = field.sub(a[i][c], sub);
            }
            for r in 0..n {
                let sub = field.mul(factor, a[r][k]);
                a[r][i] = field.sub(a[r][i], sub);
            }
        }
        diagonal.push(d);
    }
    diagonal
}

/// The JSON answer record printed by the `weights` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightsRecord {
    pub q: u32,
    pub m: u32,
    pub r: u32,
    pub a: u32,
    pub b: u32,
    pub t: u32,
    pub s: u32,
    pub w1: WeightAnswer,
    pub w2: WeightAnswer,
    pub w3: WeightAnswer,
}

pub fn weights_record(q: u32, m: u32, r: u32) -> Result<WeightsRecord, GrmError> {
    let p = decompose_r(q, m, r)?;
    let w2 = second_weight(&p).unwrap_or_else(|_| WeightAnswer::undefined("uncovered"));
    Ok(WeightsRecord { q, m, r, a: p.a, b: p.b, t: p.t, s: p.s, w1: min_weight(&p), w2, w3: third_weight(&p) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn exact(q: u32, m: u32, r: u32) -> Option<u64> {
        let w = third_weight(&decompose_r(q, m, r).unwrap());
        w.is_exact().then_some(w.value.unwrap())
    }

    #[test]
    fn decompositions() {
        let p = decompose_r(5, 3, 7).unwrap();
        assert_eq!((p.a, p.b, p.t, p.s), (1, 3, 1, 3));
        let p = decompose_r(4, 2, 3).unwrap();
        assert_eq!((p.a, p.b, p.t, p.s), (0, 3, 1, 0));
        let p = decompose_r(3, 2, 2).unwrap();
        assert_eq!((p.a, p.b, p.t, p.s), (0, 2, 1, 0));
        assert_eq!(decompose_r(2, 3, 1), Err(GrmError::UnsupportedField(2)));
        assert!(matches!(decompose_r(3, 2, 5), Err(GrmError::OutOfRangeR { .. })));
    }

    #[test]
    fn first_two_weights() {
        let w1 = |q, m, r| min_weight(&decompose_r(q, m, r).unwrap()).value.unwrap();
        assert_eq!((w1(4, 2, 3), w1(5, 3, 3), w1(3, 2, 2)), (4, 50, 3));
        let w2 = |q, m, r| second_weight(&decompose_r(q, m, r).unwrap()).unwrap().value.unwrap();
        assert_eq!((w2(4, 2, 3), w2(5, 3, 2), w2(3, 3, 3)), (6, 80, 8));
        assert!(matches!(second_weight(&decompose_r(3, 2, 1).unwrap()), Err(GrmError::UncoveredCase(_))));
    }

    #[test]
    fn cb_examples() {
        let cb = |q, b| {
            let w = cb_value(q, b).unwrap();
            (w.value.unwrap(), w.status)
        };
        assert_eq!(cb(9, 4), (49, Status::Exact));
        assert_eq!(cb(13, 5), (110, Status::Exact));
        assert_eq!(cb(17, 6), (195, Status::Exact));
        assert_eq!(cb(5, 4), (9, Status::BoundOnly));
        assert_eq!(cb_value(5, 5), Err(GrmError::OutOfRangeB { q: 5, b: 5 }));
    }

    #[test]
    fn third_weight_examples() {
        let w = third_weight(&decompose_r(4, 2, 3).unwrap());
        assert_eq!(w, WeightAnswer::exact(7, "lem:c3"));
        assert_eq!(exact(7, 4, 3), Some(1512));
        assert_eq!(exact(9, 3, 12), Some(49));
        assert_eq!(exact(3, 2, 2), Some(5));
        assert_eq!(third_weight(&decompose_r(5, 2, 1).unwrap()).status, Status::Undefined);
        let w = third_weight(&decompose_r(5, 2, 4).unwrap());
        assert_eq!(w, WeightAnswer::bound(9, "thm:3hyp"));
    }

    #[test]
    fn exact_weights_are_increasing() {
        for q in [3u32, 4, 5, 7, 8, 9, 11, 13, 16, 17] {
            for m in 1..=6u32 {
                for r in 1..=m * (q - 1) {
                    let p = decompose_r(q, m, r).unwrap();
                    let w3 = third_weight(&p);
                    if let (Ok(w2), true) = (second_weight(&p), w3.is_exact()) {
                        let w1 = min_weight(&p).value.unwrap();
                        let (w2, w3) = (w2.value.unwrap(), w3.value.unwrap());
                        assert!(w1 < w2 && w2 < w3, "q={q} m={m} r={r}: {w1} {w2} {w3}");
                    }
                }
            }
        }
    }

    #[test]
    fn quadratic_examples() {
        let f5 = Arc::new(FieldSpec::of_order(5).unwrap());
        let x1 = ReducedPoly::var(&f5, 2, 0);
        let x2 = ReducedPoly::var(&f5, 2, 1);
        let prod = x1.mul(&x2).unwrap();
        let (class, w) = quadratic_weight(&prod).unwrap();
        assert_eq!((class.r0, class.w0, w), (2, 2, 16));
        let shifted = prod.add(&ReducedPoly::constant(&f5, 2, FElem(1))).unwrap();
        let (class, w) = quadratic_weight(&shifted).unwrap();
        assert_eq!((class.rank_homogenized, class.w, w), (3, 1, 21));
        let f3 = Arc::new(FieldSpec::of_order(3).unwrap());
        let y = ReducedPoly::var(&f3, 2, 0);
        assert_eq!(quadratic_weight(&y.mul(&y).unwrap()).unwrap().1, 6);
        let cubic = y.mul(&y).unwrap().mul(&ReducedPoly::var(&f3, 2, 1)).unwrap();
        assert_eq!(quadratic_weight(&cubic), Err(GrmError::NotQuadratic));
        let f4 = Arc::new(FieldSpec::of_order(4).unwrap());
        assert_eq!(quadratic_weight(&ReducedPoly::var(&f4, 2, 0)), Err(GrmError::EvenCharacteristic));
    }

    #[test]
    fn record_serializes_in_order() {
        let text = serde_json::to_string(&weights_record(4, 2, 3).unwrap()).unwrap();
        assert!(text.starts_with(r#"{"q":4,"m":2,"r":3,"a":0,"b":3,"t":1,"s":0,"w1":{"value":4"#));
        assert!(text.ends_with(r#""w3":{"value":7,"status":"Exact","provenance":"lem:c3"}}"#));
    }
}
