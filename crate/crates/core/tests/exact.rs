use ipv_core::exact::{certify, eval, exp_enclosure, log_enclosure, sqrt_enclosure, BigRational, Expr, Relation, Status};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn q(s: &str) -> BigRational {
    BigRational::parse(s).unwrap()
}

fn contains_decimal(e: &ipv_core::Enclosure, digits: &str) -> bool {
    // `digits` is a truncation, so the value lies in [digits, digits + ulp].
    let lo = q(digits);
    let places = digits.split('.').nth(1).map_or(0, str::len) as u32;
    let hi = &lo + &BigRational::new(1.into(), num_bigint::BigInt::from(10u32).pow(places));
    e.hi() >= &lo && e.lo() <= &hi
}

/// Random tree whose value stays finite and whose log/sqrt arguments stay
/// positive: every subtree evaluates into (0, 8] by construction.
fn random_positive(rng: &mut StdRng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return Expr::constant(BigRational::ratio(rng.gen_range(1..=400), rng.gen_range(50..=100)));
    }
    match rng.gen_range(0..6) {
        0 => random_positive(rng, depth - 1) + random_positive(rng, depth - 1),
        1 => random_positive(rng, depth - 1) * random_positive(rng, depth - 1),
        2 => random_positive(rng, depth - 1) / random_positive(rng, depth - 1),
        3 => (random_positive(rng, depth - 1) + Expr::int(1)).log(),
        4 => random_positive(rng, depth - 1).sqrt(),
        _ => (random_positive(rng, depth - 1) / (Expr::int(1) + random_positive(rng, depth - 1))).exp(),
    }
}

#[test]
fn documented_enclosures() {
    assert!(log_enclosure(&BigRational::one(), 64).unwrap().is_point());
    assert!(contains_decimal(
        &log_enclosure(&q("2"), 128).unwrap(),
        "0.6931471805599453094172321214581765680755"
    ));
    let identity = eval(&(Expr::int(5) * Expr::int(5).log() - Expr::int(8) * Expr::int(2).log()), 256).unwrap();
    assert!(log_enclosure(&q("3125/256"), 256).unwrap().intersect(&identity).is_some());
    assert!(exp_enclosure(&BigRational::zero(), 64).is_point());
    assert!(contains_decimal(
        &exp_enclosure(&BigRational::one(), 128),
        "2.7182818284590452353602874713526624977572"
    ));
    assert_eq!(sqrt_enclosure(&q("4"), 64).unwrap().lo(), &q("2"));
    assert!(sqrt_enclosure(&q("4"), 64).unwrap().is_point());
    assert!(contains_decimal(
        &sqrt_enclosure(&q("5"), 128).unwrap(),
        "2.2360679774997896964091736687312762354406"
    ));
    assert!(contains_decimal(
        &sqrt_enclosure(&q("34090"), 128).unwrap(),
        "184.6347746227670948164974210"
    ));
    assert!(eval(&Expr::constant(q("3/4")), 64).unwrap().is_point());
}

#[test]
fn lemma_exponent_at_the_threshold() {
    let exponent = q("1/409081") - q("1/327264") - q("1/81816");
    assert!(exp_enclosure(&exponent, 64).lo() > &q("0.999986"));
    let q23 = q("1/30") - q("1/25") - q("1/7");
    assert!(certify(&Expr::int(1), Relation::Ge, &Expr::constant(q23).exp(), 512)
        .unwrap()
        .is_proved());
    assert_eq!(
        certify(&Expr::int(1).log(), Relation::Gt, &Expr::int(0), 512).unwrap().status,
        Status::Refuted
    );
    assert!(
        certify(&Expr::lit("1718141/133877484384"), Relation::Lt, &Expr::lit("0.000014"), 512)
            .unwrap()
            .is_proved()
    );
}

#[test]
fn inverse_pair_narrows_around_one() {
    let e = Expr::int(1).exp().log();
    let mut last = None;
    for p in [64, 128, 256, 512] {
        let enc = eval(&e, p).unwrap();
        assert!(enc.contains(&BigRational::one()));
        if let Some(w) = last {
            assert!(enc.width() < w);
        }
        last = Some(enc.width());
    }
}

#[test]
fn monotone_refinement_on_random_trees() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..300 {
        let e = random_positive(&mut rng, 4);
        let p = rng.gen_range(32..=300);
        let coarse = eval(&e, p).unwrap();
        let fine = eval(&e, p + 8).unwrap();
        assert!(fine.width() <= coarse.width(), "{e} at {p} bits");
        assert!(coarse.intersect(&fine).is_some(), "{e}: enclosures must overlap");
    }
}

#[test]
fn no_false_certainty_on_equal_transcendentals() {
    let log2 = Expr::int(2).log();
    for max in [64, 128, 256, 512, 1024] {
        for rel in [Relation::Lt, Relation::Le, Relation::Gt, Relation::Ge] {
            assert_eq!(certify(&log2, rel, &log2, max).unwrap().status, Status::Undecided, "{rel} at {max}");
        }
    }
}

#[test]
fn exact_equality_decides_weak_relations() {
    let a = Expr::constant(q("6/4"));
    let b = Expr::constant(q("3/2"));
    assert!(certify(&a, Relation::Le, &b, 64).unwrap().is_proved());
    assert!(certify(&a, Relation::Ge, &b, 64).unwrap().is_proved());
    assert_eq!(certify(&a, Relation::Lt, &b, 64).unwrap().status, Status::Refuted);
}

#[test]
fn random_ordered_pairs_are_certified_both_ways() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..2000 {
        let a = BigRational::ratio(rng.gen_range(-1_000_000_000..1_000_000_000), rng.gen_range(1..100_000));
        let b = &a + &BigRational::ratio(1, rng.gen_range(1..1_000_000_000_000));
        let (ea, eb) = (Expr::constant(a), Expr::constant(b));
        assert!(certify(&ea, Relation::Lt, &eb, 512).unwrap().is_proved());
        assert_eq!(certify(&ea, Relation::Gt, &eb, 512).unwrap().status, Status::Refuted);
    }
}

#[test]
fn pi_encloses_known_digits() {
    assert!(contains_decimal(
        &eval(&Expr::Pi, 200).unwrap(),
        "3.14159265358979323846264338327950288419716939937510"
    ));
}
