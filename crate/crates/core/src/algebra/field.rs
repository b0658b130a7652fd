//! Small finite fields `F_{p^k}` with table-driven arithmetic.
//!
//! An element is the integer `d_0 + d_1 p + ... + d_{k-1} p^{k-1}` whose
//! base-`p` digits are its coordinates in the polynomial basis
//! `1, x, ..., x^{k-1}`. The prime subfield is therefore `0..p`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A field element in canonical integer encoding `0..q`.
pub type Elem = u8;

/// Orders of the supported fields.
pub const SUPPORTED_ORDERS: [u8; 7] = [2, 3, 4, 5, 7, 8, 9];

struct FieldTables {
    p: u8,
    k: u8,
    q: u8,
    /// Low-to-high coefficients including the leading 1; empty for prime fields.
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    digits: Vec<u8>,
}

static TABLES: [OnceLock<FieldTables>; 7] = [const { OnceLock::new() }; 7];

fn slot(q: u8) -> Option<usize> {
    SUPPORTED_ORDERS.iter().position(|&o| o == q)
}

/// The fixed modulus for each supported order.
fn fixed_modulus(q: u8) -> (u8, u8, Vec<u8>) {
    match q {
        2 | 3 | 5 | 7 => (q, 1, Vec::new()),
        4 => (2, 2, vec![1, 1, 1]),
        8 => (2, 3, vec![1, 1, 0, 1]),
        9 => (3, 2, vec![1, 0, 1]),
        _ => unreachable!("unsupported order {q}"),
    }
}

/// Root test for monic polynomials of degree 2 or 3 over `F_p`, which is an
/// irreducibility test in those degrees. Coefficients are low-to-high.
pub fn is_irreducible(p: u8, modulus: &[u8]) -> bool {
    let degree = modulus.len().saturating_sub(1);
    if degree == 0 || modulus[degree] % p == 0 {
        return false;
    }
    if degree == 1 {
        return true;
    }
    if degree > 3 {
        // no factor search beyond cubics
        return false;
    }
    let pw = p as u32;
    (0..pw).all(|r| {
        let mut acc = 0u32;
        for &c in modulus.iter().rev() {
            acc = (acc * r + c as u32) % pw;
        }
        acc != 0
    })
}

fn build(q: u8) -> FieldTables {
    let (p, k, modulus) = fixed_modulus(q);
    assert!(
        k == 1 || is_irreducible(p, &modulus),
        "hard-coded modulus for F{q} is reducible"
    );
    let qs = q as usize;
    let ks = k as usize;
    let mut digits = vec![0u8; qs * ks];
    for a in 0..qs {
        let mut v = a;
        for j in 0..ks {
            digits[a * ks + j] = (v % p as usize) as u8;
            v /= p as usize;
        }
    }
    let compose = |ds: &[u8]| -> u8 {
        ds.iter()
            .rev()
            .fold(0usize, |acc, &d| acc * p as usize + d as usize) as u8
    };
    let mut add = vec![0u8; qs * qs];
    let mut mul = vec![0u8; qs * qs];
    for a in 0..qs {
        for b in 0..qs {
            let da = &digits[a * ks..(a + 1) * ks];
            let db = &digits[b * ks..(b + 1) * ks];
            let sum: Vec<u8> = da.iter().zip(db).map(|(x, y)| (x + y) % p).collect();
            add[a * qs + b] = compose(&sum);

            // schoolbook product then reduction by the monic modulus
            let mut prod = vec![0u32; 2 * ks - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] += x as u32 * y as u32;
                }
            }
            for deg in (ks..prod.len()).rev() {
                let c = prod[deg] % p as u32;
                if c != 0 {
                    for (i, &m) in modulus[..ks].iter().enumerate() {
                        let sub = c * m as u32 % p as u32;
                        prod[deg - ks + i] += p as u32 - sub;
                    }
                }
                prod[deg] = 0;
            }
            let red: Vec<u8> = prod[..ks].iter().map(|&c| (c % p as u32) as u8).collect();
            mul[a * qs + b] = compose(&red);
        }
    }
    let mut neg = vec![0u8; qs];
    let mut inv = vec![0u8; qs];
    for a in 0..qs {
        neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8;
        if a != 0 {
            inv[a] = (1..qs)
                .find(|&b| mul[a * qs + b] == 1)
                .expect("every nonzero element is invertible") as u8;
        }
    }
    FieldTables {
        p,
        k,
        q,
        modulus,
        add,
        mul,
        neg,
        inv,
        digits,
    }
}

/// Handle to one of the supported fields F2, F3, F4, F5, F7, F8, F9.
///
/// Cheap to copy; the arithmetic tables are built once per process.
#[derive(Clone, Copy)]
pub struct FieldSpec {
    t: &'static FieldTables,
}

/// The four primitive field operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Neg,
}

impl FieldSpec {
    /// The field of order `q`.
    pub fn from_order(q: u8) -> Result<Self> {
        let idx = slot(q).ok_or_else(|| {
            Error::domain(format!(
                "unsupported field order {q}; expected one of 2, 3, 4, 5, 7, 8, 9"
            ))
        })?;
        Ok(FieldSpec {
            t: TABLES[idx].get_or_init(|| build(q)),
        })
    }

    /// The field `F_{p^k}`.
    pub fn new(p: u8, k: u8) -> Result<Self> {
        let q = (p as u32).checked_pow(k as u32).filter(|&q| q <= 255);
        match q {
            Some(q) if k >= 1 && fixed_modulus_matches(p, k, q as u8) => Self::from_order(q as u8),
            _ => Err(Error::domain(format!("unsupported field F_{{{p}^{k}}}"))),
        }
    }

    /// Parses names such as `F4` or `f9`.
    pub fn parse(name: &str) -> Result<Self> {
        let digits = name
            .strip_prefix('F')
            .or_else(|| name.strip_prefix('f'))
            .unwrap_or(name);
        let q: u8 = digits
            .parse()
            .map_err(|_| Error::domain(format!("cannot parse field name {name:?}")))?;
        Self::from_order(q)
    }

    pub fn f2() -> Self {
        Self::from_order(2).unwrap()
    }

    pub fn f3() -> Self {
        Self::from_order(3).unwrap()
    }

    /// Order `q = p^k`.
    #[inline]
    pub fn q(&self) -> u8 {
        self.t.q
    }

    /// Characteristic `p`.
    #[inline]
    pub fn p(&self) -> u8 {
        self.t.p
    }

    /// Degree `k` over the prime subfield.
    #[inline]
    pub fn k(&self) -> u8 {
        self.t.k
    }

    pub fn is_prime(&self) -> bool {
        self.t.k == 1
    }

    /// Modulus coefficients (low to high, leading 1 included), absent for prime fields.
    pub fn modulus(&self) -> Option<&[u8]> {
        if self.t.modulus.is_empty() {
            None
        } else {
            Some(&self.t.modulus)
        }
    }

    pub fn prime_subfield(&self) -> FieldSpec {
        Self::from_order(self.t.p).unwrap()
    }

    pub fn name(&self) -> String {
        format!("F{}", self.t.q)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        0..self.t.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.t.add[a as usize * self.t.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.t.mul[a as usize * self.t.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.t.neg[a as usize]
    }

    /// Multiplicative inverse.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            Err(Error::domain("inversion of zero"))
        } else {
            Ok(self.t.inv[a as usize])
        }
    }

    /// Inverse of an element already known to be nonzero.
    #[inline]
    pub(crate) fn recip(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        self.t.inv[a as usize]
    }

    /// Applies one primitive operation; `b` is ignored by the unary ones.
    pub fn apply(&self, op: FieldOp, a: Elem, b: Elem) -> Result<Elem> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Neg => self.neg(a),
            FieldOp::Inv => return self.inv(a),
        })
    }

    pub fn check(&self, a: Elem) -> Result<()> {
        if a < self.t.q {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{a} is not an element of {}",
                self.name()
            )))
        }
    }

    /// Coordinates of `a` over the prime subfield in the polynomial basis.
    #[inline]
    pub fn digits(&self, a: Elem) -> &[u8] {
        let k = self.t.k as usize;
        &self.t.digits[a as usize * k..(a as usize + 1) * k]
    }

    /// The `j`-th prime-subfield coordinate of `a`.
    #[inline]
    pub fn digit(&self, a: Elem, j: usize) -> u8 {
        self.t.digits[a as usize * self.t.k as usize + j]
    }

    /// Inverse of [`FieldSpec::digits`].
    pub fn compose(&self, digits: &[u8]) -> Elem {
        digits
            .iter()
            .rev()
            .fold(0u32, |acc, &d| acc * self.t.p as u32 + d as u32) as Elem
    }

    /// The basis element `x^j` of the polynomial basis, `j < k`.
    #[inline]
    pub fn basis_elem(&self, j: usize) -> Elem {
        (self.t.p as u32).pow(j as u32) as Elem
    }
}

fn fixed_modulus_matches(p: u8, k: u8, q: u8) -> bool {
    slot(q).is_some() && {
        let (pp, kk, _) = fixed_modulus(q);
        pp == p && kk == k
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.t.q == other.t.q
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.t.q.hash(state)
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.t.q)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.t.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<FieldSpec> {
        SUPPORTED_ORDERS
            .iter()
            .map(|&q| FieldSpec::from_order(q).unwrap())
            .collect()
    }

    #[test]
    fn small_products() {
        let f3 = FieldSpec::f3();
        assert_eq!(f3.mul(2, 2), 1);
        // F4 = F2[x]/(x^2+x+1): x is 2, x+1 is 3
        let f4 = FieldSpec::from_order(4).unwrap();
        assert_eq!(f4.mul(2, 2), 3);
        for a in f4.elements() {
            assert_eq!(f4.add(a, a), 0);
        }
    }

    #[test]
    fn digits_readout() {
        let f4 = FieldSpec::from_order(4).unwrap();
        assert_eq!(f4.digits(3), &[1, 1]);
        let f3 = FieldSpec::f3();
        assert_eq!(f3.digits(2), &[2]);
        // F9 = F3[x]/(x^2+1): 2x is 0 + 2*3 = 6
        let f9 = FieldSpec::from_order(9).unwrap();
        assert_eq!(f9.digits(6), &[0, 2]);
        for f in all_fields() {
            for a in f.elements() {
                assert_eq!(f.compose(f.digits(a)), a);
            }
        }
    }

    #[test]
    fn f9_square_of_x_is_minus_one() {
        let f9 = FieldSpec::from_order(9).unwrap();
        assert_eq!(f9.mul(3, 3), 2);
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f5 = FieldSpec::from_order(5).unwrap();
        assert!(matches!(f5.inv(0), Err(Error::Domain(_))));
        assert!(f5.apply(FieldOp::Inv, 0, 0).is_err());
        assert_eq!(f5.apply(FieldOp::Inv, 2, 0).unwrap(), 3);
    }

    #[test]
    fn unsupported_fields_are_rejected() {
        assert!(FieldSpec::from_order(6).is_err());
        assert!(FieldSpec::from_order(16).is_err());
        assert!(FieldSpec::new(2, 4).is_err());
        assert_eq!(FieldSpec::new(3, 2).unwrap().q(), 9);
        assert_eq!(FieldSpec::parse("F8").unwrap().k(), 3);
        assert!(FieldSpec::parse("G7").is_err());
    }

    #[test]
    fn irreducibility_checks() {
        assert!(is_irreducible(2, &[1, 1, 1]));
        assert!(is_irreducible(2, &[1, 1, 0, 1]));
        assert!(is_irreducible(3, &[1, 0, 1]));
        // x^2 + 1 = (x+1)^2 over F2
        assert!(!is_irreducible(2, &[1, 0, 1]));
        // x^2 + 2 has root 1 over F3
        assert!(!is_irreducible(3, &[2, 0, 1]));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_fields() {
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)), "{f}");
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)), "{f}");
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "{f}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn prime_subfield_embeds_as_small_integers() {
        for f in all_fields() {
            let sub = f.prime_subfield();
            for a in 0..f.p() {
                for b in 0..f.p() {
                    assert_eq!(f.add(a, b), sub.add(a, b));
                    assert_eq!(f.mul(a, b), sub.mul(a, b));
                }
            }
        }
    }
}
