//! Quick randomized self-checks over small primes, run by `arraycode selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::{algebraic_encode, augment, deaugment, encode_any, shorten_check, CodeParams, Family};
use crate::decoder::{Decoder, ErasureSpec};
use crate::ring::{gcd, QuotientPoly, RingPoly, XorTally};
use crate::vandermonde::{build_vandermonde, solve_cramer, solve_lu, ExponentTuple};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub failure: Option<String>,
}

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_poly(rng: &mut ChaCha8Rng, p: usize, len: usize) -> RingPoly {
    RingPoly::from_coeffs(p, (0..len).map(|_| rng.gen::<bool>()))
}

fn divisions(rng: &mut ChaCha8Rng) -> Check {
    for p in [3usize, 5, 7] {
        for d in (1..p).filter(|&d| gcd(d, p) == 1) {
            let divisor = RingPoly::from_exponents(p, &[0, d as i64]);
            for _ in 0..100 {
                let mut f = random_poly(rng, p, p);
                if f.parity_at_one() {
                    f.flip(0);
                }
                for (even, cost) in [(false, p - 3), (true, (3 * p - 5) / 2)] {
                    let mut t = XorTally::new();
                    let g = if even {
                        f.div_one_plus_xd_even(d as i64, &mut t)
                    } else {
                        f.div_one_plus_xd_any(d as i64, &mut t)
                    }
                    .map_err(|e| e.to_string())?;
                    ensure(divisor.mul(&g).map_err(|e| e.to_string())? == f, || format!("p={p} d={d}: {f} not recovered"))?;
                    ensure(t.count() == cost as u64, || format!("p={p} d={d}: tally {}", t.count()))?;
                }
            }
        }
    }
    Ok(())
}

fn solver(rng: &mut ChaCha8Rng) -> Check {
    for p in [5usize, 7] {
        for r in 1..=3usize {
            let exps: Vec<i64> = (0..r as i64).collect();
            let e = ExponentTuple::new(p, &exps).map_err(|x| x.to_string())?;
            let vm = build_vandermonde(&e);
            for _ in 0..50 {
                let u0: Vec<RingPoly> = (0..r).map(|_| random_poly(rng, p, p)).collect();
                let v = vm.left_mul(&u0).map_err(|x| x.to_string())?;
                let u = solve_lu(&e, &v, &mut XorTally::new()).map_err(|x| x.to_string())?;
                let vq: Vec<QuotientPoly> = v.iter().map(QuotientPoly::reduce).collect();
                let uq: Vec<QuotientPoly> = u.iter().map(QuotientPoly::reduce).collect();
                ensure(solve_cramer(&e, &vq).map_err(|x| x.to_string())? == uq, || format!("p={p} r={r}: LU and Cramer differ"))?;
            }
        }
    }
    Ok(())
}

fn codes_for(p: usize) -> Vec<CodeParams> {
    let mut out = Vec::new();
    for r in 2..=3 {
        out.extend(CodeParams::evenodd(p, p, r));
        out.extend(CodeParams::rdp(p, p - 1, r));
    }
    out
}

fn encoders(rng: &mut ChaCha8Rng) -> Check {
    for p in [5usize, 7] {
        for params in codes_for(p) {
            for _ in 0..20 {
                let info: Vec<RingPoly> = (0..params.k()).map(|_| random_poly(rng, p, p - 1)).collect();
                let mut t = XorTally::new();
                let cw = encode_any(&params, &info, &mut t).map_err(|e| e.to_string())?;
                let aug = augment(&cw, &mut t).map_err(|e| e.to_string())?;
                ensure(algebraic_encode(&params, &info).map_err(|e| e.to_string())? == aug, || {
                    format!("{params}: algebraic and bitwise encoders differ")
                })?;
                ensure(deaugment(&aug, &mut t).map_err(|e| e.to_string())? == cw, || format!("{params}: augmentation round trip"))?;
                if params.family() == Family::Rdp {
                    ensure(aug.columns()[params.k() + 1..].iter().all(|c| !c.parity_at_one()), || {
                        format!("{params}: augmented column with odd weight")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn shortening(rng: &mut ChaCha8Rng) -> Check {
    for p in [5usize, 7] {
        for r in 2..=3 {
            let k = p - 2;
            let g: Vec<usize> = (0..=k).collect();
            let eo = CodeParams::new(Family::Evenodd, p, k + 1, r, Some(g.clone()), false).map_err(|e| e.to_string())?;
            let rdp = CodeParams::new(Family::Rdp, p, k, r, Some(g), false).map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let info: Vec<RingPoly> = (0..k).map(|_| random_poly(rng, p, p - 1)).collect();
                ensure(shorten_check(&eo, &rdp, &info).map_err(|e| e.to_string())?, || format!("p={p} r={r}: shortening mismatch"))?;
            }
        }
    }
    Ok(())
}

fn decoding(rng: &mut ChaCha8Rng) -> Check {
    for p in [5usize, 7] {
        for params in codes_for(p) {
            let n = params.n();
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize > params.r() {
                    continue;
                }
                let erased: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
                let spec = ErasureSpec::new(&params, &erased).map_err(|e| e.to_string())?;
                let dec = Decoder::new(&params, &spec).map_err(|e| format!("{params} {erased:?}: {e}"))?;
                let info: Vec<RingPoly> = (0..params.k()).map(|_| random_poly(rng, p, p - 1)).collect();
                let cw = encode_any(&params, &info, &mut XorTally::new()).map_err(|e| e.to_string())?;
                let damaged: Vec<Option<RingPoly>> =
                    cw.columns().iter().enumerate().map(|(j, c)| (!erased.contains(&j)).then(|| c.clone())).collect();
                let (out, _) = dec.decode(&damaged).map_err(|e| format!("{params} {erased:?}: {e}"))?;
                ensure(out == cw, || format!("{params}: erasing {erased:?} was not undone"))?;
            }
        }
    }
    Ok(())
}

/// Runs every check with a fixed seed.
pub fn run(seed: u64) -> Vec<CheckOutcome> {
    let checks: [(&'static str, fn(&mut ChaCha8Rng) -> Check); 5] = [
        ("division routines", divisions),
        ("LU solver against Cramer", solver),
        ("bitwise and algebraic encoders", encoders),
        ("RDP as shortened EVENODD", shortening),
        ("exhaustive erasure decoding", decoding),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    checks.iter().map(|(name, f)| CheckOutcome { name, failure: f(&mut rng).err() }).collect()
}
