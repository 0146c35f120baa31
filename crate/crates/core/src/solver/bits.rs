use num_bigint::BigUint;

/// Binary length and digit sum of `3^x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitCount {
    pub x: u32,
    pub bits: u64,
    pub ones: u64,
}

pub fn bit_count_table(x_max: u32) -> Vec<BitCount> {
    let three = BigUint::from(3u32);
    let mut p = BigUint::from(1u32);
    let mut out = Vec::with_capacity(x_max as usize + 1);
    for x in 0..=x_max {
        out.push(BitCount {
            x,
            bits: p.bits(),
            ones: p.count_ones(),
        });
        p *= &three;
    }
    out
}
