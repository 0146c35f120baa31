use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::chain::valuation;
use crate::dlog::{log2_mod_3v, log3_mod_2u};
use crate::error::{Error, Hypothesis, Result};
use crate::modcore::arith::{gcd, inv_mod, mul_mod, pow_mod};
use crate::modcore::{modified_orders, FactoredModulus};

/// Exponents with `3^y' ≡ c + 2^x'` where neither power is determinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtraneousWitness {
    pub x_prime: BigUint,
    pub y_prime: BigUint,
    pub c: BigInt,
}

impl ExtraneousWitness {
    /// Direct evaluation of the three witness conditions modulo `m`.
    pub fn holds(&self, m: &FactoredModulus) -> bool {
        let (u, v) = (m.two_exp(), m.three_exp());
        let lhs = BigUint::from(3u32).modpow(&self.y_prime, m.value());
        let rhs = (BigInt::from(BigUint::from(2u32).modpow(&self.x_prime, m.value())) + &self.c)
            .mod_floor(&BigInt::from(m.value().clone()));
        self.x_prime >= BigUint::from(u)
            && self.y_prime >= BigUint::from(v)
            && BigInt::from(lhs) == rhs
    }
}

fn violated(h: Hypothesis) -> Error {
    Error::PreconditionViolated(h)
}

/// Smallest `t >= 0` with `t ≡ class (mod step)` and `base + t * mult > floor`.
fn smallest_exceeding(class: u64, step: u64, base: u64, mult: &BigUint, floor: u32) -> BigUint {
    let mut t = BigUint::from(class);
    let floor = BigUint::from(floor);
    while BigUint::from(base) + &t * mult <= floor {
        t += step;
    }
    t
}

/// Solves `t * a ≡ b (mod n)` for the least class of `t`, returning `(t0, n / g)`.
fn solve_linear(a: u64, b: u64, n: u64) -> Option<(u64, u64)> {
    let a = a % n;
    let b = b % n;
    let g = gcd(a, n);
    if !b.is_multiple_of(g) {
        return None;
    }
    let n_g = n / g;
    if n_g == 1 {
        return Some((0, 1));
    }
    let inv = inv_mod((a / g) % n_g, n_g)?;
    Some((mul_mod((b / g) % n_g, inv, n_g), n_g))
}

/// Builds a second solution of `3^y ≡ c + 2^x` with both powers on their loops,
/// given one where at least one side is determinate and the order obstruction fails.
pub fn construct_extraneous(
    m: &FactoredModulus,
    c: &BigInt,
    x: u64,
    y: u64,
) -> Result<ExtraneousWitness> {
    if x <= 2 {
        return Err(violated(Hypothesis::TwoExponentTooSmall));
    }
    if y == 0 {
        return Err(violated(Hypothesis::ThreeExponentZero));
    }
    let (u, v) = (m.two_exp(), m.three_exp());
    let mv = BigInt::from(m.value().clone());
    let lhs = BigInt::from(BigUint::from(3u32).modpow(&BigUint::from(y), m.value()));
    let rhs =
        (BigInt::from(BigUint::from(2u32).modpow(&BigUint::from(x), m.value())) + c).mod_floor(&mv);
    if lhs != rhs {
        return Err(violated(Hypothesis::Congruence));
    }
    if x >= u64::from(u) && y >= u64::from(v) {
        return Err(violated(Hypothesis::NothingDeterminate));
    }
    let (_, o2) = modified_orders(2, m)?;
    let (_, o3) = modified_orders(3, m)?;
    if u64::from(valuation(&o3, 2)) >= x - 1 {
        return Err(violated(Hypothesis::TwoPowerDividesOrderOfThree));
    }
    if u64::from(valuation(&o2, 3)) >= y {
        return Err(violated(Hypothesis::ThreePowerDividesOrderOfTwo));
    }

    // 3^(y + s o3) ≡ c (mod 2^u) with y + s o3 > v
    let s = if u == 0 {
        smallest_exceeding(0, 1, y, &o3, v)
    } else {
        let q = 1u64 << u;
        let cq = c.mod_floor(&BigInt::from(q)).to_u64().expect("reduced");
        let d = inv_mod(cq, q).ok_or_else(|| Error::NotCoprime {
            a: c.to_string(),
            b: format!("2^{u}"),
        })?;
        let two_x = if x >= u64::from(u) { 0 } else { 1u64 << x };
        let z = (1 + mul_mod(two_x, d, q)) % q;
        let log = log3_mod_2u(z, u)?.expect("z ≡ 1 (mod 8) is a power of 3");
        let n = log.class_modulus;
        let o3n = (&o3 % n).to_u64().expect("reduced");
        let (s0, step) = solve_linear(o3n, (n - log.residue_class % n) % n, n)
            .ok_or_else(|| violated(Hypothesis::TwoPowerDividesOrderOfThree))?;
        smallest_exceeding(s0, step, y, &o3, v)
    };

    // 2^(x + r o2) ≡ -c (mod 3^v) with x + r o2 > u
    let r = if v == 0 {
        smallest_exceeding(0, 1, x, &o2, u)
    } else {
        let q = 3u64.pow(v);
        let neg_c = (-c).mod_floor(&BigInt::from(q)).to_u64().expect("reduced");
        let inv2x = inv_mod(pow_mod(2, x, q), q).expect("2 is a unit");
        let log = log2_mod_3v(mul_mod(neg_c, inv2x, q), v)?;
        let n = log.class_modulus;
        let o2n = (&o2 % n).to_u64().expect("reduced");
        let (r0, step) = solve_linear(o2n, log.residue_class, n)
            .ok_or_else(|| violated(Hypothesis::ThreePowerDividesOrderOfTwo))?;
        smallest_exceeding(r0, step, x, &o2, u)
    };

    let w = ExtraneousWitness {
        x_prime: BigUint::from(x) + r * &o2,
        y_prime: BigUint::from(y) + s * &o3,
        c: c.clone(),
    };
    assert!(w.holds(m), "constructed witness fails modulo {m}");
    debug_assert!(!w.x_prime.is_zero());
    Ok(w)
}
