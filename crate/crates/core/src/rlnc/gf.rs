//! Binary extension fields GF(2^w) for w in {4, 8, 16}, via log/antilog tables.
//!
//! Primitive polynomials:
//!
//! | w  | polynomial                   | hex       |
//! |----|------------------------------|-----------|
//! | 4  | x^4 + x + 1                  | `0x13`    |
//! | 8  | x^8 + x^4 + x^3 + x^2 + 1    | `0x11d`   |
//! | 16 | x^16 + x^12 + x^3 + x + 1    | `0x1100b` |

use rand::Rng;

use crate::error::{Error, Result};

pub type Elem = u16;

#[derive(Debug, Clone)]
pub struct Field {
    bits: u32,
    order: usize,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

pub fn primitive_polynomial(bits: u32) -> Option<u32> {
    match bits {
        4 => Some(0x13),
        8 => Some(0x11d),
        16 => Some(0x1100b),
        _ => None,
    }
}

impl Field {
    pub fn new(bits: u32) -> Result<Field> {
        let poly = primitive_polynomial(bits)
            .ok_or_else(|| Error::Precondition(format!("unsupported field GF(2^{bits})")))?;
        let size = 1usize << bits;
        let order = size - 1;
        let mut exp = vec![0 as Elem; 2 * order];
        let mut log = vec![0u32; size];
        let mut x: u32 = 1;
        for (i, e) in exp.iter_mut().take(order).enumerate() {
            *e = x as Elem;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (1 << bits) != 0 {
                x ^= poly;
            }
        }
        debug_assert_eq!(x, 1, "generator order must be 2^w - 1");
        exp.copy_within(..order, order);
        Ok(Field { bits, order, exp, log })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn size(&self) -> usize {
        self.order + 1
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.exp[self.order - self.log[a as usize] as usize])
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.random_range(0..self.size()) as Elem
    }

    /// `acc += c · v`, element-wise.
    pub fn axpy(&self, acc: &mut [Elem], c: Elem, v: &[Elem]) {
        if c == 0 {
            return;
        }
        for (a, &x) in acc.iter_mut().zip(v) {
            *a ^= self.mul(c, x);
        }
    }

    /// Rank of the row set by Gaussian elimination.
    pub fn rank(&self, rows: &[Vec<Elem>]) -> usize {
        let mut m: Vec<Vec<Elem>> = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = self.inv(m[rank][col]).expect("nonzero pivot");
            let pivot_row: Vec<Elem> = m[rank].iter().map(|&x| self.mul(inv, x)).collect();
            for (i, row) in m.iter_mut().enumerate() {
                if i != rank && row[col] != 0 {
                    let c = row[col];
                    self.axpy(row, c, &pivot_row);
                }
            }
            m[rank] = pivot_row;
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }

    /// Solves `coeffs · X = payloads` for `X` when `coeffs` has full column rank.
    pub fn solve(&self, coeffs: &[Vec<Elem>], payloads: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
        let cols = coeffs.first().map_or(0, Vec::len);
        let mut m: Vec<(Vec<Elem>, Vec<Elem>)> =
            coeffs.iter().cloned().zip(payloads.iter().cloned()).collect();
        for col in 0..cols {
            let pivot = (col..m.len()).find(|&i| m[i].0[col] != 0)?;
            m.swap(col, pivot);
            let inv = self.inv(m[col].0[col])?;
            let (c, p) = &m[col];
            let c: Vec<Elem> = c.iter().map(|&x| self.mul(inv, x)).collect();
            let p: Vec<Elem> = p.iter().map(|&x| self.mul(inv, x)).collect();
            for (i, (rc, rp)) in m.iter_mut().enumerate() {
                if i != col && rc[col] != 0 {
                    let f = rc[col];
                    self.axpy(rc, f, &c);
                    self.axpy(rp, f, &p);
                }
            }
            m[col] = (c, p);
        }
        Some(m.into_iter().take(cols).map(|(_, p)| p).collect())
    }
}
