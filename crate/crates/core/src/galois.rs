//! Arithmetic in GF(2^w) and in a degree-m extension GF((2^w)^m).
//!
//! The base field uses exp/log tables built from a fixed primitive polynomial
//! per width. Extension elements are coefficient vectors in the polynomial
//! basis `1, x, ..., x^(m-1)` modulo a monic irreducible polynomial over the
//! base field, so the subfield embeds as the degree-0 coordinate.

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Operations shared by every field the matrix engine runs over.
pub trait Field: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Characteristic 2, so negation is the identity.
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.clone()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Number of elements, or `None` if it does not fit in a `u64`.
    fn order(&self) -> Option<u64>;

    /// The element with the given index in a fixed enumeration, `0` being zero.
    fn element(&self, index: u64) -> Self::Elem;

    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let a = self.random_element(rng);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }
}

/// Primitive polynomials for w = 1..=16, bit `i` holding the coefficient of x^i.
pub const PRIMITIVE_POLYS: [u32; 16] = [
    0x3,     // x + 1
    0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x83,    // x^7 + x + 1
    0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100B, // x^16 + x^12 + x^3 + x + 1
];

/// Carry-less product of `a` and `b` reduced modulo `modulus` (degree `w`).
pub fn clmul_mod(a: u32, b: u32, modulus: u32, w: u32) -> u32 {
    let mut acc: u64 = 0;
    for i in 0..32 {
        if (b >> i) & 1 == 1 {
            acc ^= (a as u64) << i;
        }
    }
    let m = modulus as u64;
    for i in (w as usize..64).rev() {
        if (acc >> i) & 1 == 1 {
            acc ^= m << (i - w as usize);
        }
    }
    acc as u32
}

/// GF(2^w) with table-driven multiplication.
#[derive(Clone)]
pub struct BaseField {
    w: u32,
    modulus: u32,
    // exp has length 2(q-1) so log sums never need a modulo.
    exp: Arc<[u16]>,
    log: Arc<[u16]>,
}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.w, self.modulus)
    }
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.w == other.w && self.modulus == other.modulus
    }
}

impl Eq for BaseField {}

/// Builds GF(2^w) from the fixed primitive polynomial for `w`.
pub fn build_base_field(w: u32) -> Result<BaseField> {
    if !(1..=16).contains(&w) {
        return Err(Error::WidthOutOfRange(w));
    }
    let modulus = PRIMITIVE_POLYS[(w - 1) as usize];
    let q = 1usize << w;
    let order = q - 1;
    let generator = clmul_mod(2, 1, modulus, w);
    let mut exp = vec![0u16; 2 * order];
    let mut log = vec![0u16; q];
    let mut x: u32 = 1;
    for (i, slot) in exp.iter_mut().take(order).enumerate() {
        if i > 0 && x == 1 {
            return Err(Error::Internal(format!("modulus {modulus:#x} is not primitive")));
        }
        *slot = x as u16;
        log[x as usize] = i as u16;
        x = clmul_mod(x, generator, modulus, w);
    }
    if x != 1 {
        return Err(Error::Internal(format!("modulus {modulus:#x} is not primitive")));
    }
    for i in 0..order {
        exp[order + i] = exp[i];
    }
    Ok(BaseField {
        w,
        modulus,
        exp: exp.into(),
        log: log.into(),
    })
}

impl BaseField {
    pub fn w(&self) -> u32 {
        self.w
    }

    /// Field size q = 2^w.
    pub fn q(&self) -> u32 {
        1 << self.w
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn mul_elem(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[i]
    }

    #[inline]
    pub fn inv_elem(&self, a: u16) -> Option<u16> {
        if a == 0 {
            return None;
        }
        let order = (self.q() - 1) as usize;
        let l = self.log[a as usize] as usize;
        Some(self.exp[(order - l) % order])
    }

    pub fn exp_table(&self) -> &[u16] {
        &self.exp[..(self.q() - 1) as usize]
    }

    pub fn log_of(&self, a: u16) -> Option<u16> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn pow_elem(&self, a: u16, e: u64) -> u16 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q() - 1) as u64;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % order)) % order) as usize]
    }
}

impl Field for BaseField {
    type Elem = u16;

    fn zero(&self) -> u16 {
        0
    }
    fn one(&self) -> u16 {
        1
    }
    fn is_zero(&self, a: &u16) -> bool {
        *a == 0
    }
    fn add(&self, a: &u16, b: &u16) -> u16 {
        a ^ b
    }
    fn mul(&self, a: &u16, b: &u16) -> u16 {
        self.mul_elem(*a, *b)
    }
    fn inv(&self, a: &u16) -> Option<u16> {
        self.inv_elem(*a)
    }
    fn order(&self) -> Option<u64> {
        Some(self.q() as u64)
    }
    fn element(&self, index: u64) -> u16 {
        debug_assert!(index < self.q() as u64);
        index as u16
    }
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> u16 {
        rng.gen_range(0..self.q()) as u16
    }
}

// Polynomials over the base field, lowest degree first, kept trimmed.
mod poly {
    use super::BaseField;

    pub fn trim(p: &mut Vec<u16>) {
        while p.last() == Some(&0) {
            p.pop();
        }
    }

    pub fn degree(p: &[u16]) -> Option<usize> {
        p.iter().rposition(|&c| c != 0)
    }

    pub fn rem(f: &BaseField, a: &[u16], m: &[u16]) -> Vec<u16> {
        let dm = degree(m).expect("nonzero modulus");
        let lead_inv = f.inv_elem(m[dm]).expect("nonzero lead");
        let mut r = a.to_vec();
        trim(&mut r);
        while let Some(dr) = degree(&r) {
            if dr < dm {
                break;
            }
            let c = f.mul_elem(r[dr], lead_inv);
            let shift = dr - dm;
            for (i, &mi) in m.iter().enumerate().take(dm + 1) {
                r[shift + i] ^= f.mul_elem(c, mi);
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(f: &BaseField, a: &[u16], b: &[u16]) -> Vec<u16> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u16; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] ^= f.mul_elem(ai, bj);
            }
        }
        trim(&mut out);
        out
    }

    pub fn mulmod(f: &BaseField, a: &[u16], b: &[u16], m: &[u16]) -> Vec<u16> {
        rem(f, &mul(f, a, b), m)
    }

    pub fn add(a: &[u16], b: &[u16]) -> Vec<u16> {
        let mut out = vec![0u16; a.len().max(b.len())];
        for (i, &c) in a.iter().enumerate() {
            out[i] ^= c;
        }
        for (i, &c) in b.iter().enumerate() {
            out[i] ^= c;
        }
        trim(&mut out);
        out
    }

    pub fn gcd(f: &BaseField, a: &[u16], b: &[u16]) -> Vec<u16> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        a
    }

    /// `x^(q^i) mod m`, given `x^(q^(i-1)) mod m` as `prev`: raise to the q-th power.
    pub fn frobenius_step(f: &BaseField, prev: &[u16], m: &[u16]) -> Vec<u16> {
        let mut p = prev.to_vec();
        for _ in 0..f.w() {
            p = mulmod(f, &p, &p, m);
        }
        p
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial over the base field.
pub fn is_irreducible(base: &BaseField, f: &[u16]) -> bool {
    let Some(m) = poly::degree(f) else {
        return false;
    };
    if m == 0 || f[m] != 1 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = vec![0u16, 1];
    // powers[i] = x^(q^i) mod f
    let mut powers = Vec::with_capacity(m + 1);
    powers.push(poly::rem(base, &x, f));
    for i in 1..=m {
        let next = poly::frobenius_step(base, &powers[i - 1], f);
        powers.push(next);
    }
    if poly::add(&powers[m], &poly::rem(base, &x, f)) != Vec::<u16>::new() {
        return false;
    }
    for p in prime_factors(m) {
        let h = poly::add(&powers[m / p], &x);
        let g = poly::gcd(base, f, &h);
        if poly::degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Seeded search for a monic irreducible polynomial of degree `m` over `base`.
///
/// Returns `m + 1` coefficients, lowest degree first, the last one being 1.
pub fn find_irreducible(base: &BaseField, m: usize, seed: u64) -> Result<Vec<u16>> {
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1_000_000 {
        let mut f: Vec<u16> = (0..m).map(|_| base.random_element(&mut rng)).collect();
        f.push(1);
        if is_irreducible(base, &f) {
            return Ok(f);
        }
    }
    Err(Error::Internal("irreducible polynomial search exhausted".into()))
}

/// An element of the extension field: `m` base-field coordinates in the
/// polynomial basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtElement(pub Vec<u16>);

impl ExtElement {
    pub fn coords(&self) -> &[u16] {
        &self.0
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// The base field together with a degree-`m` extension of it.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldTower {
    base: BaseField,
    m: usize,
    ext_modulus: Vec<u16>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ^ {} mod {:?}", self.base, self.m, self.ext_modulus)
    }
}

impl FieldTower {
    /// Validates `ext_modulus` (monic, irreducible, degree >= 1).
    pub fn new(base: BaseField, ext_modulus: Vec<u16>) -> Result<Self> {
        let mut f = ext_modulus;
        poly::trim(&mut f);
        let m = match poly::degree(&f) {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::ZeroDegree),
        };
        if f.iter().any(|&c| c as u32 >= base.q()) || !is_irreducible(&base, &f) {
            return Err(Error::NotIrreducible);
        }
        Ok(FieldTower {
            base,
            m,
            ext_modulus: f,
        })
    }

    /// GF(2^w) extended by a seeded irreducible polynomial of degree `m`.
    pub fn with_seed(w: u32, m: usize, seed: u64) -> Result<Self> {
        let base = build_base_field(w)?;
        let f = find_irreducible(&base, m, seed)?;
        FieldTower::new(base, f)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ext_modulus(&self) -> &[u16] {
        &self.ext_modulus
    }

    /// Embeds a base-field scalar as a degree-0 element.
    pub fn embed(&self, a: u16) -> ExtElement {
        let mut v = vec![0u16; self.m];
        v[0] = a;
        ExtElement(v)
    }

    /// The basis element x^i of the polynomial basis.
    pub fn basis(&self, i: usize) -> ExtElement {
        let mut v = vec![0u16; self.m];
        v[i] = 1;
        ExtElement(v)
    }

    pub fn from_coords(&self, coords: Vec<u16>) -> Result<ExtElement> {
        if coords.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "extension element has {} coordinates, expected {}",
                coords.len(),
                self.m
            )));
        }
        if coords.iter().any(|&c| c as u32 >= self.base.q()) {
            return Err(Error::InvalidParameters("coordinate outside base field".into()));
        }
        Ok(ExtElement(coords))
    }

    /// Multiplies every coordinate by the base scalar `lambda`.
    pub fn scale(&self, lambda: u16, a: &ExtElement) -> ExtElement {
        ExtElement(a.0.iter().map(|&c| self.base.mul_elem(lambda, c)).collect())
    }

    pub fn ext_add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        ExtElement(a.0.iter().zip(&b.0).map(|(x, y)| x ^ y).collect())
    }

    pub fn ext_mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let m = self.m;
        let f = &self.base;
        let mut prod = vec![0u16; 2 * m - 1];
        for (i, &ai) in a.0.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.0.iter().enumerate() {
                if bj != 0 {
                    prod[i + j] ^= f.mul_elem(ai, bj);
                }
            }
        }
        // ext_modulus is monic, so x^m = -(lower terms).
        for d in (m..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &fi) in self.ext_modulus.iter().enumerate().take(m) {
                if fi != 0 {
                    prod[d - m + i] ^= f.mul_elem(c, fi);
                }
            }
        }
        prod.truncate(m);
        ExtElement(prod)
    }

    pub fn ext_square(&self, a: &ExtElement) -> ExtElement {
        self.ext_mul(a, a)
    }

    pub fn ext_pow(&self, a: &ExtElement, mut e: u128) -> ExtElement {
        let mut result = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.ext_mul(&result, &b);
            }
            b = self.ext_square(&b);
            e >>= 1;
        }
        result
    }

    /// Inverse by the extended Euclidean algorithm over the base field.
    pub fn ext_inv(&self, a: &ExtElement) -> Result<ExtElement> {
        let f = &self.base;
        let mut r0 = self.ext_modulus.clone();
        let mut r1 = a.0.clone();
        poly::trim(&mut r1);
        if r1.is_empty() {
            return Err(Error::ZeroInverse);
        }
        let mut s0: Vec<u16> = Vec::new();
        let mut s1: Vec<u16> = vec![1];
        while poly::degree(&r1).is_some_and(|d| d > 0) {
            let (quot, rem) = divmod(f, &r0, &r1);
            let s2 = poly::add(&s0, &poly::mul(f, &quot, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r1 is a nonzero constant since ext_modulus is irreducible.
        let c = f.inv_elem(r1[0]).ok_or(Error::ZeroInverse)?;
        let mut out: Vec<u16> = s1.iter().map(|&x| f.mul_elem(x, c)).collect();
        out = poly::rem(f, &out, &self.ext_modulus);
        out.resize(self.m, 0);
        Ok(ExtElement(out))
    }

    /// `a^(q^i)`.
    pub fn frobenius(&self, a: &ExtElement, i: usize) -> ExtElement {
        let mut x = a.clone();
        for _ in 0..i {
            x = self.frobenius_once(&x);
        }
        x
    }

    /// `a^q`, by `w` successive squarings.
    pub fn frobenius_once(&self, a: &ExtElement) -> ExtElement {
        let mut x = a.clone();
        for _ in 0..self.base.w() {
            x = self.ext_square(&x);
        }
        x
    }

    pub fn is_zero_elem(&self, a: &ExtElement) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
}

fn divmod(f: &BaseField, a: &[u16], b: &[u16]) -> (Vec<u16>, Vec<u16>) {
    let db = poly::degree(b).expect("nonzero divisor");
    let lead_inv = f.inv_elem(b[db]).expect("nonzero lead");
    let mut r = a.to_vec();
    poly::trim(&mut r);
    let mut q = vec![0u16; r.len().saturating_sub(db).max(1)];
    while let Some(dr) = poly::degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul_elem(r[dr], lead_inv);
        let shift = dr - db;
        q[shift] ^= c;
        for (i, &bi) in b.iter().enumerate().take(db + 1) {
            r[shift + i] ^= f.mul_elem(c, bi);
        }
        poly::trim(&mut r);
    }
    poly::trim(&mut q);
    (q, r)
}

impl Field for FieldTower {
    type Elem = ExtElement;

    fn zero(&self) -> ExtElement {
        ExtElement(vec![0; self.m])
    }
    fn one(&self) -> ExtElement {
        self.embed(1)
    }
    fn is_zero(&self, a: &ExtElement) -> bool {
        self.is_zero_elem(a)
    }
    fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        self.ext_add(a, b)
    }
    fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        self.ext_mul(a, b)
    }
    fn inv(&self, a: &ExtElement) -> Option<ExtElement> {
        self.ext_inv(a).ok()
    }
    fn order(&self) -> Option<u64> {
        let bits = self.base.w() as usize * self.m;
        (bits < 64).then(|| 1u64 << bits)
    }
    fn element(&self, index: u64) -> ExtElement {
        let w = self.base.w();
        let mask = (1u64 << w) - 1;
        ExtElement(
            (0..self.m)
                .map(|i| {
                    let shift = i as u32 * w;
                    if shift >= 64 {
                        0
                    } else {
                        ((index >> shift) & mask) as u16
                    }
                })
                .collect(),
        )
    }
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElement {
        ExtElement((0..self.m).map(|_| self.base.random_element(rng)).collect())
    }
}
