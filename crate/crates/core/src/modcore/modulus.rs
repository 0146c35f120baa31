use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::arith::{factor_u64, is_prime_u64};
use crate::error::{Error, Result};

/// A modulus `M = 2^u * 3^v * M'` kept in factored form.
///
/// Every prime-power component must fit in 64 bits; the product itself is
/// arbitrary precision. The empty product (the zero ring `Z/1Z`) is allowed
/// since the 2-part, 3-part and `M'` of a modulus are often trivial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredModulus {
    two_exp: u32,
    three_exp: u32,
    coprime_factors: Vec<(u64, u32)>,
    value: BigUint,
}

impl FactoredModulus {
    pub fn one() -> Self {
        FactoredModulus {
            two_exp: 0,
            three_exp: 0,
            coprime_factors: Vec::new(),
            value: BigUint::one(),
        }
    }

    /// Build from `(prime, exponent)` pairs in any order; repeated primes are merged.
    pub fn from_prime_powers<I>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u32)>,
    {
        let mut merged: Vec<(u64, u32)> = Vec::new();
        for (p, e) in factors {
            if e == 0 {
                continue;
            }
            if !is_prime_u64(p) {
                return Err(Error::NotPrime(p));
            }
            match merged.iter_mut().find(|(q, _)| *q == p) {
                Some((_, f)) => *f += e,
                None => merged.push((p, e)),
            }
        }
        merged.sort_unstable();
        let mut two_exp = 0;
        let mut three_exp = 0;
        let mut coprime_factors = Vec::new();
        let mut value = BigUint::one();
        for (p, e) in merged {
            let pe = p
                .checked_pow(e)
                .ok_or(Error::PrimePowerTooLarge { prime: p, exp: e })?;
            value *= pe;
            match p {
                2 => two_exp = e,
                3 => three_exp = e,
                _ => coprime_factors.push((p, e)),
            }
        }
        Ok(FactoredModulus {
            two_exp,
            three_exp,
            coprime_factors,
            value,
        })
    }

    /// Factor a machine-size modulus.
    pub fn from_u64(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        Self::from_prime_powers(factor_u64(n)?)
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::from_prime_powers([(p, 1)])
    }

    pub fn two_exp(&self) -> u32 {
        self.two_exp
    }

    pub fn three_exp(&self) -> u32 {
        self.three_exp
    }

    pub fn coprime_factors(&self) -> &[(u64, u32)] {
        &self.coprime_factors
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.value).ok()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    /// All prime-power components in ascending prime order, including 2 and 3.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        let two = (self.two_exp > 0).then_some((2u64, self.two_exp));
        let three = (self.three_exp > 0).then_some((3u64, self.three_exp));
        two.into_iter()
            .chain(three)
            .chain(self.coprime_factors.iter().copied())
    }

    /// Exponent of the prime `p` in this modulus.
    pub fn exponent_of(&self, p: u64) -> u32 {
        match p {
            2 => self.two_exp,
            3 => self.three_exp,
            _ => self
                .coprime_factors
                .iter()
                .find(|(q, _)| *q == p)
                .map_or(0, |&(_, e)| e),
        }
    }

    /// The factor with every power of `p` removed.
    pub fn without_prime(&self, p: u64) -> Self {
        self.filtered(|q| q != p)
    }

    /// `M'`, the part coprime to 6.
    pub fn coprime_part(&self) -> Self {
        self.filtered(|q| q != 2 && q != 3)
    }

    /// The component `p^e` of this modulus (1 when `p` does not divide it).
    pub fn prime_part(&self, p: u64) -> Self {
        self.filtered(|q| q == p)
    }

    fn filtered(&self, keep: impl Fn(u64) -> bool) -> Self {
        Self::from_prime_powers(self.prime_powers().filter(|&(q, _)| keep(q)))
            .expect("sub-product of a valid modulus")
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_prime_powers(self.prime_powers().chain(other.prime_powers()))
            .expect("product of valid moduli")
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.prime_powers().all(|(p, e)| other.exponent_of(p) >= e)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        let parts = other
            .prime_powers()
            .map(|(p, e)| (p, e - self.exponent_of(p)));
        Some(Self::from_prime_powers(parts).expect("quotient of valid moduli"))
    }

    pub fn is_coprime_to(&self, other: &Self) -> bool {
        self.prime_powers().all(|(p, _)| other.exponent_of(p) == 0)
    }

    /// True when this modulus is a single prime to the first power.
    pub fn as_prime(&self) -> Option<u64> {
        let mut it = self.prime_powers();
        match (it.next(), it.next()) {
            (Some((p, 1)), None) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for FactoredModulus {
    /// Renders as `2^4 * 7 * 73`; the trivial modulus renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (p, e) in self.prime_powers() {
            if !first {
                f.write_str(" * ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// An element of `Z/MZ`, held as its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    modulus: FactoredModulus,
    value: BigUint,
}

impl Residue {
    pub fn new(value: BigUint, modulus: &FactoredModulus) -> Self {
        let value = value % modulus.value();
        Residue {
            modulus: modulus.clone(),
            value,
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &FactoredModulus {
        &self.modulus
    }

    /// Images under `Z/MZ -> Z/p^eZ` for each prime-power component.
    pub fn components(&self) -> Vec<(u64, u64)> {
        self.modulus
            .prime_powers()
            .map(|(p, e)| {
                let pe = p.pow(e);
                let r = u64::try_from(&self.value % pe).expect("reduced below a u64");
                (r, pe)
            })
            .collect()
    }
}

/// Combine residues modulo pairwise-coprime moduli into one residue modulo the product.
pub fn crt_combine(parts: &[(BigUint, FactoredModulus)]) -> Result<Residue> {
    for (i, (_, a)) in parts.iter().enumerate() {
        for (_, b) in &parts[i + 1..] {
            if !a.is_coprime_to(b) {
                return Err(Error::NotCoprime {
                    a: a.to_string(),
                    b: b.to_string(),
                });
            }
        }
    }
    let mut modulus = FactoredModulus::one();
    let mut acc = BigUint::zero();
    for (value, m) in parts {
        let (x, _) = crt_pair(&acc, modulus.value(), value, m.value())
            .expect("coprime moduli always combine");
        acc = x;
        modulus = modulus.mul(m);
    }
    Ok(Residue::new(acc, &modulus))
}

/// Solve `x ≡ a (mod m)` and `x ≡ b (mod n)` for arbitrary (not necessarily coprime)
/// positive moduli. Returns the solution modulo `lcm(m, n)` or `None` if incompatible.
pub fn crt_pair(a: &BigUint, m: &BigUint, b: &BigUint, n: &BigUint) -> Option<(BigUint, BigUint)> {
    use num_bigint::BigInt;
    let a = BigInt::from(a % m);
    let b = BigInt::from(b % n);
    let mi = BigInt::from(m.clone());
    let ni = BigInt::from(n.clone());
    let ext = mi.extended_gcd(&ni);
    let g = ext.gcd;
    let diff = &b - &a;
    if !(&diff % &g).is_zero() {
        return None;
    }
    let lcm = &mi / &g * &ni;
    // x = a + m * ((b - a)/g * inv(m/g) mod n/g)
    let n_g = &ni / &g;
    let t = ((&diff / &g) * ext.x).mod_floor(&n_g);
    let x = (a + &mi * t).mod_floor(&lcm);
    Some((
        x.to_biguint().expect("nonnegative"),
        lcm.to_biguint().expect("positive"),
    ))
}
