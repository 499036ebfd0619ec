//! Binary extension fields GF(2^n), `2 <= n <= 16`, with elements packed as
//! bit vectors and multiplication by carry-less shift-and-add.

/// Irreducible polynomials indexed by degree (bit i = coefficient of x^i).
const IRREDUCIBLE: [u32; 17] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11B, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003,
    0x1100B,
];

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Gf2n {
    degree: u32,
    modulus: u32,
}

impl Gf2n {
    pub fn new(degree: u32) -> Option<Self> {
        (2..=16).contains(&degree).then(|| Gf2n { degree, modulus: IRREDUCIBLE[degree as usize] })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn size(&self) -> usize {
        1 << self.degree
    }

    /// The class of `x`, a generator of the field as an algebra over GF(2).
    pub fn x(&self) -> u32 {
        2
    }

    pub fn mul(&self, mut a: u32, mut b: u32) -> u32 {
        let top = 1 << self.degree;
        let mut acc = 0;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_mod(mut a: u64, m: u64) -> u64 {
        let dm = 63 - m.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= dm {
            a ^= m << (63 - a.leading_zeros() - dm);
        }
        a
    }

    /// Trial division by every polynomial of degree 1..=n/2.
    fn irreducible(p: u64) -> bool {
        let n = 63 - p.leading_zeros();
        (2u64..1 << (n / 2 + 1)).all(|d| poly_mod(p, d) != 0)
    }

    #[test]
    fn table_polynomials_are_irreducible() {
        for n in 2..=16 {
            let p = IRREDUCIBLE[n] as u64;
            assert_eq!(63 - p.leading_zeros(), n as u32);
            assert!(irreducible(p), "degree {n}");
        }
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        for n in 2..=8 {
            let f = Gf2n::new(n).unwrap();
            for a in 1..f.size() as u32 {
                assert!((1..f.size() as u32).any(|b| f.mul(a, b) == 1), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn gf4_multiplication() {
        let f = Gf2n::new(2).unwrap();
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.mul(3, 3), 2);
    }

    #[test]
    fn aes_field_known_product() {
        let f = Gf2n::new(8).unwrap();
        assert_eq!(f.mul(0x57, 0x83), 0xC1);
    }
}
