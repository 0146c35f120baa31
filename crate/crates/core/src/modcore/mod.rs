//! Arithmetic in `Z/MZ` for factored moduli: CRT, totients, multiplicative and
//! modified orders, and the tail-and-loop shape of the powers of 2 and 3.

pub mod arith;
mod modulus;
mod order;

pub use modulus::{crt_combine, crt_pair, FactoredModulus, Residue};
pub use order::{
    cycle_shape, euler_phi, is_determinate, modified_orders, multiplicative_order,
    order_mod_prime_power, order_mod_prime_power_factored, phi_prime_power_factors, pow_mod,
    CycleShape,
};
