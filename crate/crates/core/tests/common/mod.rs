#![allow(dead_code)]

use negacantor::rational::{ratio, to_f64};
use negacantor::{domain, Basis, DigitString, Elements, Kind, Rational, Tail};
use proptest::prelude::*;

/// Eventually periodic bases with small elements.
pub fn basis() -> impl Strategy<Value = Basis> {
    (
        prop::collection::vec(2u64..=6, 0..=2),
        prop::collection::vec(2u64..=6, 1..=3),
    )
        .prop_map(|(prefix, period)| Basis::eventually_periodic(prefix, period).unwrap())
}

/// A rational `p/q` with `q <= 60` in the basis domain.
pub fn value_in(basis: &Basis) -> impl Strategy<Value = Rational> {
    let dom = domain(basis);
    let (lo, hi) = (to_f64(dom.lo()), to_f64(dom.hi()));
    (1i64..=60, 0.0f64..=1.0).prop_filter_map("outside the domain", move |(q, t)| {
        let p = ((lo + t * (hi - lo)) * q as f64).round() as i64;
        let x = ratio(p, q);
        dom.contains(&x).then_some(x)
    })
}

pub fn basis_and_value() -> impl Strategy<Value = (Basis, Rational)> {
    basis().prop_flat_map(|b| {
        let v = value_in(&b);
        (Just(b), v)
    })
}

/// Digit strings whose tail period aligns with the basis period.
pub fn digits_for(basis: &Basis, kind: Kind) -> impl Strategy<Value = DigitString> {
    let per = basis.periodicity().unwrap();
    let b = basis.clone();
    (0usize..=4, 0usize..=2, prop::collection::vec(any::<u64>(), 16)).prop_map(move |(extra, reps, raw)| {
        let pre = per.start + extra;
        let prefix: Vec<u64> = (1..=pre).map(|n| raw[n - 1] % b.element(n)).collect();
        let tail = if reps == 0 {
            Tail::Zeros
        } else {
            let l = per.period.len() * reps;
            Tail::Periodic((1..=l).map(|j| raw[(pre + j - 1) % 16] % b.element(pre + j)).collect())
        };
        DigitString::new(kind, prefix, tail, &b).unwrap()
    })
}

pub fn basis_and_digits(kind: Kind) -> impl Strategy<Value = (Basis, DigitString)> {
    basis().prop_flat_map(move |b| {
        let d = digits_for(&b, kind);
        (Just(b), d)
    })
}
