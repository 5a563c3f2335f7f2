use num_bigint::BigInt;
use proptest::prelude::*;

use quasilie::liealg::{
    assoc_product, bracket, jacobi_residual, mirror, phi_matrix, raw_product, sdp_compose, sdp_equivalence_check,
    triangular_split, Generator, Mode, SdpElement,
};
use quasilie::modelset::{compatibility_window, graded_add, is_compatible};
use quasilie::{FreeElement, PointSetSpec, RingElement, RingSpec, Window};

fn arb_ring() -> impl Strategy<Value = RingSpec> {
    prop_oneof![
        Just(RingSpec::FIBONACCI),
        Just(RingSpec::new(2, 1).unwrap()),
        Just(RingSpec::new(3, -1).unwrap()),
        Just(RingSpec::new(3, 1).unwrap()),
        Just(RingSpec::new(5, -1).unwrap()),
    ]
}

fn arb_coeff() -> impl Strategy<Value = i64> {
    prop_oneof![-50i64..=50, -1_000_000_000i64..=1_000_000_000]
}

fn arb_element(ring: RingSpec) -> impl Strategy<Value = RingElement> {
    (arb_coeff(), arb_coeff()).prop_map(move |(a, b)| ring.element(a, b))
}

fn ring_and(n: usize) -> impl Strategy<Value = (RingSpec, Vec<RingElement>)> {
    arb_ring().prop_flat_map(move |r| (Just(r), prop::collection::vec(arb_element(r), n)))
}

/// Points of `Σ(window)` near the origin, indexed by a strategy.
fn members(window: Window, reach: i64) -> Vec<RingElement> {
    let ring = window.ring();
    PointSetSpec::new(window).enumerate(&ring.int(-reach), &ring.int(reach)).unwrap()
}

fn arb_generator(mode: Mode) -> impl Strategy<Value = Generator> {
    let ring = RingSpec::FIBONACCI;
    let indices = members(Window::symmetric(ring), 30);
    let gens: Vec<Generator> =
        (0..=6u32).flat_map(|a| indices.iter().filter_map(move |m| Generator::new(a, m.clone(), mode).ok())).collect();
    prop::sample::select(gens)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms((ring, xs) in ring_and(3)) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(x + y, y + x);
        prop_assert_eq!(x * y, y * x);
        prop_assert_eq!((x * y) * z, x * (y * z));
        prop_assert_eq!(x * (y + z), x * y + x * z);
        prop_assert_eq!(x + &ring.zero(), x.clone());
        prop_assert_eq!(x * &ring.one(), x.clone());
        prop_assert!((x - x).is_zero());
    }

    #[test]
    fn conjugation_is_a_ring_automorphism((_ring, xs) in ring_and(2)) {
        let (x, y) = (&xs[0], &xs[1]);
        prop_assert_eq!((x * y).conjugate(), x.conjugate() * y.conjugate());
        prop_assert_eq!((x + y).conjugate(), x.conjugate() + y.conjugate());
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
    }

    #[test]
    fn norm_is_multiplicative((_ring, xs) in ring_and(2)) {
        let (x, y) = (&xs[0], &xs[1]);
        prop_assert_eq!((x * y).norm(), x.norm() * y.norm());
        // N(x) = x·x'
        let prod = x * &x.conjugate();
        prop_assert_eq!(prod.c1(), &BigInt::from(0));
        prop_assert_eq!(prod.c0(), &x.norm());
    }

    #[test]
    fn sign_agrees_with_floats_away_from_zero((_ring, xs) in ring_and(1)) {
        let x = &xs[0];
        let (v, _) = x.approx();
        let scale = x.c0().to_string().len().max(x.c1().to_string().len()) as i32;
        if v.abs() > 10f64.powi(scale - 12) {
            prop_assert_eq!(x.is_positive(), v > 0.0);
            prop_assert_eq!(x.is_negative(), v < 0.0);
        }
    }

    #[test]
    fn order_is_compatible_with_addition((_ring, xs) in ring_and(3)) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(x.cmp(y), (x + z).cmp(&(y + z)));
    }

    #[test]
    fn floor_brackets_the_value((_ring, xs) in ring_and(1)) {
        let x = &xs[0];
        let f = x.floor();
        let one = x.ring().one();
        let fe = x.ring().int(f.clone());
        prop_assert!(fe <= *x);
        prop_assert!(*x < &fe + &one);
        prop_assert_eq!(x.ceil(), -(-x).floor());
    }

    #[test]
    fn alpha_powers_add(ring in arb_ring(), j in -40i64..40, k in -40i64..40) {
        prop_assert_eq!(ring.alpha_pow(j) * ring.alpha_pow(k), ring.alpha_pow(j + k));
        prop_assert!(ring.alpha_pow(j).is_unit());
    }

    #[test]
    fn exact_division_inverts_multiplication((_ring, xs) in ring_and(2)) {
        let (x, y) = (&xs[0], &xs[1]);
        if !y.is_zero() {
            prop_assert_eq!((x * y).div_exact(y), Some(x.clone()));
        }
    }

    #[test]
    fn text_round_trip((ring, xs) in ring_and(1)) {
        let x = &xs[0];
        prop_assert_eq!(RingElement::parse(ring, &x.to_string()).unwrap(), x.clone());
        let json = serde_json::to_string(x).unwrap();
        let back: quasilie::qring::RingElementJson = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.into_element(ring).unwrap(), x.clone());
    }

    #[test]
    fn scaling_transports_membership(
        (ring, xs) in ring_and(1),
        k in -6i64..6,
        shape in 0usize..4,
    ) {
        let w = [Window::unit(ring), Window::symmetric(ring), Window::open(ring.zero(), ring.one()).unwrap(),
                 Window::closed_open(ring.int(-1), ring.alpha_conj().abs()).unwrap()][shape].clone();
        let u = ring.alpha_conj_pow(k);
        let x = &xs[0];
        let scaled = w.scale(&u).unwrap();
        prop_assert_eq!(w.contains(x).unwrap(), scaled.contains(&(&u * x)).unwrap());
        prop_assert_eq!(w.contains(x).unwrap(), w.negate().contains(&-x).unwrap());
    }

    #[test]
    fn window_text_round_trip(ring in arb_ring(), a in -5i64..5, b in 1i64..5, lo in any::<bool>(), hi in any::<bool>()) {
        let (l, h) = (ring.element(a, -1), ring.element(a + b, 0));
        if let Ok(w) = Window::new(
            quasilie::Boundary { endpoint: l, closed: lo },
            quasilie::Boundary { endpoint: h, closed: hi },
        ) {
            prop_assert_eq!(Window::parse(ring, &w.to_string()).unwrap(), w);
        }
    }

    #[test]
    fn enumeration_is_sorted_and_exact(ring in arb_ring(), lo in -40i64..0, len in 1i64..40) {
        let set = PointSetSpec::new(Window::symmetric(ring));
        let (a, b) = (ring.int(lo), ring.int(lo + len));
        let pts = set.enumerate(&a, &b).unwrap();
        for w in pts.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for p in &pts {
            prop_assert!(set.member(p).unwrap());
            prop_assert!(*p >= a && *p <= b);
        }
    }

    #[test]
    fn chain_is_a_monoid(ring in arb_ring(), i in 0usize..40, j in 0usize..40) {
        let pts = members(Window::unit(ring), 40);
        let (x, y) = (&pts[i % pts.len()], &pts[j % pts.len()]);
        prop_assert!(PointSetSpec::chain(ring).member(&(x * y)).unwrap());
    }

    #[test]
    fn compatible_sums_stay_compatible(ring in arb_ring(), i in 0usize..60, j in 0usize..60, a in 1u32..7, b in 1u32..7) {
        let pts = members(Window::unit(ring), 40);
        let (x, y) = (&pts[i % pts.len()], &pts[j % pts.len()]);
        if is_compatible(x, a).unwrap() && is_compatible(y, b).unwrap() {
            let s = graded_add(x, a, y).unwrap();
            prop_assert!(is_compatible(&s, a + b).unwrap());
        }
        prop_assert!(compatibility_window(ring, a).unwrap().contains(&x.conjugate()).unwrap() == is_compatible(x, a).unwrap());
    }

    #[test]
    fn product_is_associative(g in arb_generator(Mode::SymmetricClosed), h in arb_generator(Mode::SymmetricClosed), k in arb_generator(Mode::SymmetricClosed)) {
        let mode = Mode::SymmetricClosed;
        let left = assoc_product(&assoc_product(&g, &h, mode).unwrap(), &k, mode).unwrap();
        let right = assoc_product(&g, &assoc_product(&h, &k, mode).unwrap(), mode).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn bracket_is_antisymmetric_and_jacobi(g in arb_generator(Mode::SymmetricClosed), h in arb_generator(Mode::SymmetricClosed), k in arb_generator(Mode::SymmetricClosed)) {
        let mode = Mode::SymmetricClosed;
        let gh = bracket(&g, &h, mode).unwrap();
        let hg = bracket(&h, &g, mode).unwrap();
        prop_assert!((&gh + &hg).is_zero());
        prop_assert!(jacobi_residual(&g, &h, &k, mode).unwrap().is_zero());
    }

    #[test]
    fn semidirect_form_matches_product(g in arb_generator(Mode::SymmetricClosed), h in arb_generator(Mode::StrictPaper)) {
        prop_assert!(sdp_equivalence_check(&g, &h));
        let (a, m) = raw_product(&g, &h).unwrap();
        let z = sdp_compose(&SdpElement::from_generator(&g), &SdpElement::from_generator(&h)).unwrap();
        prop_assert_eq!(z.a, a);
        prop_assert_eq!(z.index(), m);
    }

    #[test]
    fn phi_is_a_homomorphism(ring in arb_ring(), a in 0u32..30, b in 0u32..30) {
        prop_assert_eq!(&phi_matrix(ring, a) * &phi_matrix(ring, b), phi_matrix(ring, a + b));
    }

    #[test]
    fn mirror_preserves_strict_validity(g in arb_generator(Mode::StrictPaper)) {
        prop_assert!(mirror(&g).is_valid(Mode::StrictPaper));
        prop_assert_eq!(mirror(&mirror(&g)), g);
    }

    #[test]
    fn triangular_parts_sum_back(gs in prop::collection::vec(arb_generator(Mode::SymmetricClosed), 0..8), cs in prop::collection::vec(-5i64..5, 8)) {
        let ring = RingSpec::FIBONACCI;
        let x: FreeElement<Generator> = gs.into_iter().zip(cs).map(|(g, c)| (g, ring.int(c))).collect();
        let parts = triangular_split(&x);
        prop_assert_eq!(&(&parts.neg + &parts.center) + &parts.pos, x);
        for g in parts.pos.keys() {
            prop_assert!(g.m().conjugate().is_positive());
        }
        for g in parts.neg.keys() {
            prop_assert!(g.m().conjugate().is_negative());
        }
    }
}
