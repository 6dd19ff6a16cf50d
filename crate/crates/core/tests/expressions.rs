use std::sync::Arc;

use gacf::expr::{BinOp, ExprKind, Func};
use gacf::{compile_frame, eval, parse_expression, products, Expr, Frame, FrameSpec, Multivector};
use proptest::prelude::*;

fn node(kind: ExprKind) -> Expr {
    Expr { kind, span: 0..0 }
}

fn frame() -> Arc<Frame> {
    compile_frame(&FrameSpec::euclidean(3)).unwrap()
}

fn corpus() -> Vec<&'static str> {
    include_str!("data/expressions.txt").lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).collect()
}

#[test]
fn corpus_round_trips_and_evaluates() {
    let f = frame();
    for src in corpus() {
        let e = parse_expression(src).unwrap_or_else(|err| panic!("{src}: {err}"));
        let printed = e.to_string();
        let again = parse_expression(&printed).unwrap();
        assert_eq!(again, e, "{src} printed as {printed}");
        assert_eq!(again.to_string(), printed);
        let (a, b) = (eval(&e, &f), eval(&again, &f));
        match (a, b) {
            (Ok(a), Ok(b)) => assert_eq!(a, b, "{src}"),
            (Err(a), Err(b)) => assert_eq!(a.to_string(), b.to_string()),
            _ => panic!("{src}: evaluation differs after round trip"),
        }
    }
}

#[test]
fn precedence_and_associativity() {
    let f = frame();
    let v = |s: &str| eval(&parse_expression(s).unwrap(), &f).unwrap();
    assert_eq!(v("e0 + e1 ^ e2"), v("e0 + (e1 ^ e2)"));
    assert_eq!(v("e0 * e1 ^ e2"), v("e0 * (e1 ^ e2)"));
    assert_eq!(v("e0 <| e0 * e1"), v("e0 <| (e0 * e1)"));
    assert_eq!(v("3 - 2 - 1"), Multivector::zero(&f));
    assert_eq!(v("-e0 ^ e1"), v("(-e0) ^ e1"));
    assert_eq!(v("2e1"), Multivector::scalar(&f, 20.0));
    assert!(parse_expression("2 e1").is_err());
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..40).prop_map(|k| node(ExprKind::Number(k as f64 / 4.0))),
        (0usize..3).prop_map(|k| node(ExprKind::Basis(k))),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    let ops = [BinOp::Add, BinOp::Sub, BinOp::Gp, BinOp::Outer, BinOp::LeftContraction, BinOp::RightContraction];
    let unary = [Func::Rev, Func::Gi, Func::Even, Func::Odd, Func::Dual];
    leaf().prop_recursive(4, 24, 2, move |inner| {
        prop_oneof![
            (prop::sample::select(ops.to_vec()), inner.clone(), inner.clone())
                .prop_map(|(op, l, r)| node(ExprKind::Binary(op, Box::new(l), Box::new(r)))),
            inner.clone().prop_map(|e| node(ExprKind::Neg(Box::new(e)))),
            (prop::sample::select(unary.to_vec()), inner.clone()).prop_map(|(f, e)| node(ExprKind::Call(f, vec![e]))),
            (inner.clone(), inner).prop_map(|(a, b)| node(ExprKind::Call(Func::Sp, vec![a, b]))),
        ]
    })
}

proptest! {
    #[test]
    fn printed_ast_parses_back(e in expr()) {
        let text = e.to_string();
        let back = parse_expression(&text).unwrap();
        prop_assert_eq!(&back, &e, "{}", text);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn eval_is_deterministic_and_matches_the_library(e in expr(), g in expr()) {
        let f = frame();
        let x = eval(&e, &f);
        prop_assert_eq!(eval(&e, &f).map_err(|e| e.to_string()), x.clone().map_err(|e| e.to_string()));
        let (Ok(x), Ok(y)) = (x, eval(&g, &f)) else { return Ok(()) };
        let sum = node(ExprKind::Binary(BinOp::Gp, Box::new(e), Box::new(g)));
        prop_assert_eq!(eval(&sum, &f).unwrap(), products::gp(&x, &y).unwrap());
    }
}
