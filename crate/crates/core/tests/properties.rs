use proptest::prelude::*;

use arraycode::codes::{algebraic_encode, augment, deaugment, encode_any, shorten_check};
use arraycode::costmodel::predict_lu;
use arraycode::decoder::{admissible_lambdas, plan, plan_with_lambda};
use arraycode::shardio::ShardHeader;
use arraycode::{
    build_vandermonde, solve_cramer, solve_lu, CodeParams, CodewordArray, Decoder, ErasureSpec, ExponentTuple, Family,
    QuotientPoly, RingPoly, XorTally,
};

const PRIMES: [usize; 4] = [5, 7, 11, 13];

fn poly(p: usize, len: usize) -> impl Strategy<Value = RingPoly> {
    proptest::collection::vec(any::<bool>(), len).prop_map(move |bits| RingPoly::from_coeffs(p, bits))
}

fn stored_columns(p: usize, k: usize) -> impl Strategy<Value = Vec<RingPoly>> {
    proptest::collection::vec(poly(p, p - 1), k)
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Evenodd), Just(Family::Rdp)]
}

/// An mds_mode code with p in {5, 7}, r in {2, 3} and k at most its bound.
fn code() -> impl Strategy<Value = CodeParams> {
    (family(), prop_oneof![Just(5usize), Just(7)], 2usize..=3).prop_flat_map(|(f, p, r)| {
        let kmax = if f == Family::Evenodd { p } else { p - 1 };
        (1..=kmax).prop_map(move |k| CodeParams::new(f, p, k, r, None, true).unwrap())
    })
}

fn code_and_info() -> impl Strategy<Value = (CodeParams, Vec<RingPoly>)> {
    code().prop_flat_map(|c| {
        let info = stored_columns(c.p(), c.k());
        (Just(c), info)
    })
}

fn encode(params: &CodeParams, info: &[RingPoly]) -> CodewordArray {
    encode_any(params, info, &mut XorTally::new()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn division_multiplies_back(
        (p, d, f) in prop::sample::select(PRIMES.to_vec())
            .prop_flat_map(|p| (Just(p), 1..p, poly(p, p)))
    ) {
        let f = if f.parity_at_one() { let mut f = f; f.flip(p - 1); f } else { f };
        let divisor = RingPoly::from_exponents(p, &[0, d as i64]);
        let mut t = XorTally::new();
        let q = f.div_one_plus_xd_any(d as i64, &mut t).unwrap();
        prop_assert_eq!(divisor.mul(&q).unwrap(), f.clone());
        prop_assert_eq!(t.count(), p as u64 - 3);
        let mut t = XorTally::new();
        let q = f.div_one_plus_xd_even(d as i64, &mut t).unwrap();
        prop_assert_eq!(divisor.mul(&q).unwrap(), f);
        prop_assert!(!q.parity_at_one());
        prop_assert_eq!(t.count(), (3 * p as u64 - 5) / 2);
    }

    #[test]
    fn lu_matches_cramer_up_to_the_kernel(
        (p, exps, u0) in (prop::sample::select(PRIMES.to_vec()), 1usize..=5).prop_flat_map(|(p, r)| {
            let exps = Just((0..p as i64).collect::<Vec<_>>()).prop_shuffle().prop_map(move |v| v[..r].to_vec());
            (Just(p), exps, proptest::collection::vec(poly(p, p), r))
        })
    ) {
        let e = ExponentTuple::new(p, &exps).unwrap();
        let vm = build_vandermonde(&e);
        let v = vm.left_mul(&u0).unwrap();
        let mut t = XorTally::new();
        let u = solve_lu(&e, &v, &mut t).unwrap();
        prop_assert_eq!(t.count(), predict_lu(exps.len(), p));
        prop_assert_eq!(vm.left_mul(&u).unwrap(), v.clone());
        let vq: Vec<QuotientPoly> = v.iter().map(QuotientPoly::reduce).collect();
        let uq: Vec<QuotientPoly> = u.iter().map(QuotientPoly::reduce).collect();
        prop_assert_eq!(solve_cramer(&e, &vq).unwrap(), uq);
        // any two solutions differ by M_p on an even number of components
        let flipped = u.iter().zip(&u0).filter(|(a, b)| a != b).count();
        prop_assert_eq!(flipped % 2, 0);
        for (a, b) in u.iter().zip(&u0).filter(|(a, b)| a != b) {
            prop_assert_eq!(a.add(b, &mut XorTally::new()).unwrap(), RingPoly::all_ones(p));
        }
    }

    #[test]
    fn encoding_is_linear((params, x) in code_and_info(), seed in any::<u64>()) {
        let p = params.p();
        let y: Vec<RingPoly> = (0..params.k())
            .map(|j| RingPoly::from_word(p, seed.rotate_left(j as u32 * 7) & ((1 << (p - 1)) - 1)))
            .collect();
        let sum: Vec<RingPoly> = x.iter().zip(&y).map(|(a, b)| a.add(b, &mut XorTally::new()).unwrap()).collect();
        let (ex, ey, es) = (encode(&params, &x), encode(&params, &y), encode(&params, &sum));
        for j in 0..params.n() {
            prop_assert_eq!(ex.column(j).add(ey.column(j), &mut XorTally::new()).unwrap(), es.column(j).clone());
        }
    }

    #[test]
    fn algebraic_form_is_the_augmented_encoding((params, info) in code_and_info()) {
        let mut t = XorTally::new();
        let cw = encode(&params, &info);
        let aug = augment(&cw, &mut t).unwrap();
        prop_assert_eq!(algebraic_encode(&params, &info).unwrap(), aug.clone());
        prop_assert_eq!(deaugment(&aug, &mut t).unwrap(), cw);
        if params.family() == Family::Rdp {
            for j in params.k() + 1..params.n() {
                prop_assert!(!aug.column(j).parity_at_one());
            }
        }
    }

    #[test]
    fn rdp_is_shortened_evenodd(
        (p, k, r, info) in (prop_oneof![Just(5usize), Just(7)], 2usize..=3)
            .prop_flat_map(|(p, r)| (Just(p), 1..p, Just(r)))
            .prop_flat_map(|(p, k, r)| (Just(p), Just(k), Just(r), stored_columns(p, k)))
    ) {
        let g: Vec<usize> = (0..=k).collect();
        let eo = CodeParams::new(Family::Evenodd, p, k + 1, r, Some(g.clone()), false).unwrap();
        let rdp = CodeParams::new(Family::Rdp, p, k, r, Some(g), false).unwrap();
        prop_assert!(shorten_check(&eo, &rdp, &info).unwrap());
    }

    #[test]
    fn erasures_up_to_r_are_recovered((params, info) in code_and_info(), mask in any::<u16>()) {
        let n = params.n();
        let erased: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).take(params.r()).collect();
        let cw = encode(&params, &info);
        let damaged: Vec<Option<RingPoly>> =
            cw.columns().iter().enumerate().map(|(j, c)| (!erased.contains(&j)).then(|| c.clone())).collect();
        let spec = ErasureSpec::new(&params, &erased).unwrap();
        prop_assert_eq!(plan(&params, &spec).unwrap(), plan(&params, &spec).unwrap());
        let fb = Decoder::fallback(&params, &spec).unwrap().decode(&damaged).unwrap().0;
        prop_assert_eq!(&fb, &cw);
        for l in admissible_lambdas(&params, &spec) {
            let dec = Decoder::with_plan(&params, plan_with_lambda(&params, &spec, l).unwrap()).unwrap();
            prop_assert_eq!(&dec.decode(&damaged).unwrap().0, &cw);
        }
    }

    #[test]
    fn too_many_erasures_are_rejected(params in code()) {
        let erased: Vec<usize> = (0..=params.r()).collect();
        prop_assert!(ErasureSpec::new(&params, &erased).is_err());
    }

    #[test]
    fn header_round_trips(params in code(), stripes in 0u64..1 << 40, len in any::<u64>(), col in 0usize..8) {
        let col = col % params.n();
        let h = ShardHeader::for_column(&params, col, stripes, len).unwrap();
        let mut buf = Vec::new();
        h.write_to(&mut buf).unwrap();
        prop_assert_eq!(buf.len(), h.encoded_len());
        let back = ShardHeader::read_from(&mut buf.as_slice()).unwrap();
        // mds_mode is an encode-time check and is not stored
        let got = back.params().unwrap();
        prop_assert_eq!((got.family(), got.p(), got.k(), got.r(), got.g()), (params.family(), params.p(), params.k(), params.r(), params.g()));
        prop_assert_eq!(back, h);
    }
}
