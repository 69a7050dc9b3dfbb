use std::sync::Arc;

use grmw_core::arrangements::{
    enumerate_types, n3_prime, n_points, top_distinct, verify_top3, ArrangementType, ConfigTag,
};
use grmw_core::constructors::{
    build_arrangement_poly, build_bound_witness, build_third_weight, build_third_weight_2var,
    classify_line_configuration, Block, BoundBranch, ConstructError, Line2, LineConfigTag, LinearForm, TwoVarFamily,
};
use grmw_core::gf::{FElem, FieldSpec};
use grmw_core::grm::{cb_value, decompose_r, min_weight, quadratic_weight, second_weight, third_weight, Status};
use grmw_core::polyring::{AffineMap, Degree, PolyError, ReducedPoly};
use grmw_core::spectrum::{line_union_oracle, LineSearchOptions};

fn field(q: u64) -> Arc<FieldSpec> {
    Arc::new(FieldSpec::of_order(q).unwrap())
}

fn poly(f: &Arc<FieldSpec>, m: usize, terms: &[(&[u64], u32)]) -> ReducedPoly {
    ReducedPoly::reduce(f, m, terms.iter().map(|(e, c)| (e.to_vec(), FElem(*c)))).unwrap()
}

#[test]
fn field_examples() {
    let f5 = FieldSpec::of_order(5).unwrap();
    assert_eq!(f5.mul(FElem(2), FElem(3)), FElem(1));
    let f4 = FieldSpec::new(2, 2, Some(vec![1, 1, 1])).unwrap();
    assert_eq!(f4.mul(FElem(2), FElem(2)), FElem(3));
    let f9 = FieldSpec::new(3, 2, Some(vec![1, 0, 1])).unwrap();
    assert_eq!(f9.mul(FElem(3), FElem(3)), FElem(2));
    assert_eq!(f9.elements().count(), 9);
    for q in [3u64, 4, 5, 7, 8, 9, 16, 25, 27, 32] {
        let f = FieldSpec::of_order(q).unwrap();
        assert!(f.elements().all(|x| f.pow(x, q) == x), "x^q = x fails for q={q}");
    }
}

#[test]
fn polynomial_examples() {
    let f3 = field(3);
    let f4 = field(4);
    let f5 = field(5);
    assert_eq!(poly(&f3, 1, &[(&[3], 1)]), poly(&f3, 1, &[(&[1], 1)]));
    assert_eq!(poly(&f4, 1, &[(&[6], 1)]), poly(&f4, 1, &[(&[3], 1)]));
    assert!(poly(&f3, 1, &[(&[2], 1), (&[2], 2)]).is_zero());
    assert_eq!(poly(&f3, 3, &[(&[1, 1, 0], 1), (&[0, 0, 1], 1)]).degree(), Degree::Finite(2));
    assert_eq!(ReducedPoly::zero(&f3, 2).degree(), Degree::NegInfinity);
    assert_eq!(poly(&f3, 1, &[(&[4], 1)]).degree(), Degree::Finite(2));

    // (x-1)(x-2) = x^2 - 3x + 2 at x = 3.
    let g = poly(&f5, 1, &[(&[2], 1), (&[1], 2), (&[0], 2)]);
    assert_eq!(g.evaluate(&[FElem(3)]).unwrap(), FElem(2));
    assert_eq!(poly(&f4, 1, &[(&[3], 1)]).evaluate(&[FElem(2)]).unwrap(), FElem(1));

    let x1 = ReducedPoly::var(&f3, 2, 0);
    let table: Vec<u32> = x1.truth_table().unwrap().iter().map(|v| v.code()).collect();
    assert_eq!(table, vec![0, 0, 0, 1, 1, 1, 2, 2, 2]);
    let f2 = Arc::new(FieldSpec::of_order(2).unwrap());
    assert!(matches!(ReducedPoly::var(&f2, 1, 0).truth_table(), Err(PolyError::UnsupportedField(2))));

    assert_eq!(ReducedPoly::constant(&f5, 2, FElem(3)).weight().unwrap(), 25);
    let two_roots = poly(&f4, 2, &[(&[2, 0], 1), (&[1, 0], 1)]);
    assert_eq!(two_roots.weight().unwrap(), 8);

    let translate =
        AffineMap::new(&f5, vec![vec![FElem(1), FElem(0)], vec![FElem(0), FElem(1)]], vec![FElem(2), FElem(0)])
            .unwrap();
    let shifted = ReducedPoly::var(&f5, 2, 0).compose_affine(&translate).unwrap();
    assert_eq!(shifted, poly(&f5, 2, &[(&[1, 0], 1), (&[0, 0], 2)]));
    assert_eq!(shifted.weight().unwrap(), 20);

    let x1x2 = poly(&f3, 2, &[(&[1, 1], 1)]);
    assert!(x1x2.restrict(FElem(0)).unwrap().is_zero());
    assert_eq!(x1x2.restrict(FElem(1)).unwrap(), ReducedPoly::var(&f3, 1, 0));
    assert_eq!(x1x2.factor_hyperplane(FElem(0)).unwrap(), ReducedPoly::var(&f3, 2, 1));
    assert!(matches!(ReducedPoly::var(&f3, 2, 1).factor_hyperplane(FElem(0)), Err(PolyError::DoesNotVanish(_))));
    let sq = poly(&f3, 1, &[(&[2], 1)]);
    assert_eq!(sq.mul(&sq).unwrap(), sq);
}

#[test]
fn weight_formula_examples() {
    let p = decompose_r(5, 3, 7).unwrap();
    assert_eq!((p.a, p.b, p.t, p.s), (1, 3, 1, 3));
    let p = decompose_r(4, 2, 3).unwrap();
    assert_eq!((p.a, p.b, p.t, p.s), (0, 3, 1, 0));
    assert_eq!(min_weight(&decompose_r(5, 3, 3).unwrap()).value, Some(50));
    assert_eq!(second_weight(&decompose_r(4, 2, 3).unwrap()).unwrap().value, Some(6));
    assert_eq!(second_weight(&decompose_r(5, 3, 2).unwrap()).unwrap().value, Some(80));
    assert_eq!(second_weight(&decompose_r(3, 3, 3).unwrap()).unwrap().value, Some(8));

    assert_eq!(cb_value(9, 4).unwrap().value, Some(49));
    assert_eq!(cb_value(13, 5).unwrap().value, Some(110));
    assert_eq!(cb_value(17, 6).unwrap().value, Some(195));
    let c54 = cb_value(5, 4).unwrap();
    assert_eq!((c54.value, c54.status), (Some(9), Status::BoundOnly));

    let w3 = |q, m, r| third_weight(&decompose_r(q, m, r).unwrap());
    assert_eq!((w3(4, 2, 3).value, w3(4, 2, 3).status), (Some(7), Status::Exact));
    assert_eq!(w3(7, 4, 3).value, Some(1512));
    assert_eq!(w3(9, 3, 12).value, Some(49));
    assert_eq!(w3(3, 2, 2).value, Some(5));
    assert_eq!(w3(5, 2, 1).status, Status::Undefined);
}

#[test]
fn quadratic_examples() {
    let f5 = field(5);
    let f3 = field(3);
    let (class, w) = quadratic_weight(&poly(&f5, 2, &[(&[1, 1], 1)])).unwrap();
    assert_eq!((class.r0, class.w0, w), (2, 2, 16));
    assert_eq!(quadratic_weight(&poly(&f5, 2, &[(&[1, 1], 1), (&[0, 0], 1)])).unwrap().1, 21);
    let (class, w) = quadratic_weight(&poly(&f3, 2, &[(&[2, 0], 1)])).unwrap();
    assert_eq!((class.r0, w), (1, 6));
    // x1 x2 = 1 has q - 1 solutions, so x1 x2 - 1 has weight q^2 - q + 1.
    assert_eq!(quadratic_weight(&poly(&f3, 2, &[(&[1, 1], 1), (&[0, 0], 2)])).unwrap().1, 7);
}

#[test]
fn arrangement_examples() {
    assert_eq!(n_points(3, 2, &ArrangementType::new(vec![])).unwrap(), 0);
    assert_eq!(n_points(3, 2, &ArrangementType::new(vec![1, 1])).unwrap(), 5);
    assert_eq!(n_points(4, 2, &ArrangementType::new(vec![3])).unwrap(), 12);

    let third = n3_prime(7, 2, 6).unwrap();
    assert_eq!((third.winner, third.n), (ConfigTag::T1e, 35));
    assert_eq!(n3_prime(5, 3, 4).unwrap().n, 80);
    let third = n3_prime(9, 2, 4).unwrap();
    assert_eq!((third.winner, third.n), (ConfigTag::T3d, 32));

    let listed: Vec<(Vec<u32>, u64)> =
        enumerate_types(3, 2, 2).into_iter().map(|(t, n)| (t.sizes().to_vec(), n)).collect();
    assert_eq!(listed, vec![(vec![2], 6), (vec![1, 1], 5), (vec![1], 3)]);
    assert_eq!(top_distinct(&enumerate_types(3, 1, 2), 3), vec![2, 1]);
    assert_eq!(top_distinct(&enumerate_types(4, 2, 3), 3), vec![12, 10, 8]);
    assert!(verify_top3(9, 2, 4).unwrap().pass());
    let report = verify_top3(3, 3, 3).unwrap();
    assert_eq!(report.measured[2], 18);
}

#[test]
fn constructor_examples() {
    let f4 = field(4);
    let (p, _) = build_arrangement_poly(
        &f4,
        2,
        &[Block { form: LinearForm::Coordinate(0), shifts: vec![FElem(0), FElem(1), FElem(2)] }],
    )
    .unwrap();
    assert_eq!(p.weight().unwrap(), 4);
    let f3 = field(3);
    let full = Block { form: LinearForm::Coordinate(0), shifts: vec![FElem(0), FElem(1), FElem(2)] };
    assert_eq!(build_arrangement_poly(&f3, 2, &[full]), Err(ConstructError::FullBlock));

    let w = build_bound_witness(&field(5), 2, 0, 4, BoundBranch::TwoLines).unwrap();
    assert_eq!(w.poly.weight().unwrap(), 9);
    let w = build_bound_witness(&f3, 3, 1, 1, BoundBranch::B1Q3).unwrap();
    assert_eq!(w.poly.weight().unwrap(), 9);
    let w = build_bound_witness(&field(4), 3, 1, 1, BoundBranch::B1Q4).unwrap();
    assert_eq!(w.poly.weight().unwrap(), 18);

    assert_eq!(build_third_weight_2var(&f4, 3, TwoVarFamily::Triangle, None).unwrap().0.weight().unwrap(), 7);
    assert_eq!(build_third_weight_2var(&field(9), 4, TwoVarFamily::D, None).unwrap().0.weight().unwrap(), 49);
    assert_eq!(build_third_weight_2var(&field(13), 5, TwoVarFamily::Quad, None).unwrap().0.weight().unwrap(), 110);

    let w = build_third_weight(&field(7), 5, 2, 3).unwrap();
    assert_eq!(w.poly.weight().unwrap(), 216);
    assert_eq!(w.poly.degree(), Degree::Finite(15));
    let w = build_third_weight(&f3, 2, 0, 2).unwrap();
    assert_eq!(w.poly.weight().unwrap(), 5);
}

#[test]
fn line_configuration_examples() {
    let f9 = field(9);
    let parallel: Vec<Line2> = (0..3).map(|c| Line2::vertical(FElem(c))).collect();
    assert_eq!(classify_line_configuration(&f9, &parallel).unwrap(), LineConfigTag::A);
    let grid = [
        Line2::vertical(FElem(0)),
        Line2::vertical(FElem(1)),
        Line2::horizontal(FElem(0)),
        Line2::horizontal(FElem(1)),
    ];
    assert_eq!(classify_line_configuration(&f9, &grid).unwrap(), LineConfigTag::D);
    let f7 = field(7);
    let star = [
        Line2::vertical(FElem(0)),
        Line2::horizontal(FElem(0)),
        Line2::new(&f7, FElem(1), FElem(1), FElem(0)).unwrap(),
    ];
    assert_eq!(classify_line_configuration(&f7, &star).unwrap(), LineConfigTag::C);
}

#[test]
fn line_union_at_seven() {
    let res = line_union_oracle(&FieldSpec::of_order(7).unwrap(), 3, &LineSearchOptions::default()).unwrap();
    assert_eq!(&res.distinct_sizes()[..3], &[21, 19, 18]);
    assert_eq!(49 - 18, cb_value(7, 3).unwrap().value.unwrap());
}
