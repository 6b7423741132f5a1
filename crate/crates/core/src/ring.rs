//! Finite local principal ideal rings `O_m = O/π^m` with residue field `F_p`,
//! their valuations, unit groups, additive characters, and generic dual groups
//! of small abelian groups.
//!
//! Two interchangeable backends realize the same residue cardinality `q = p`:
//!
//! * [`Backend::Zmod`]: `O_m = Z/p^m`, uniformizer `π = p` (mixed
//!   characteristic);
//! * [`Backend::PolyMod`]: `O_m = F_p[t]/(t^m)`, uniformizer `π = t` (equal
//!   characteristic).
//!
//! Every element is stored as a canonical code in `[0, p^m)`: the residue
//! itself for `Zmod`, the base-`p` digit string `a₀ + a₁p + … + a_{m−1}p^{m−1}`
//! for the polynomial `a₀ + a₁t + … + a_{m−1}t^{m−1}` in `PolyMod`. `m = 0`
//! gives the trivial ring `{0}`, whose unit group is the trivial group (the
//! convention `O_0^× = {1}`).
//!
//! All downstream counts (orbit sizes, constituent counts, Hom dimensions)
//! must agree between the two backends at equal `(p, m)`; only the residue
//! field enters.

use crate::{check_bound, Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::TAU;

/// Which concrete model of `O_m` a context uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// `Z/p^m`.
    Zmod,
    /// `F_p[t]/(t^m)`.
    PolyMod,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Zmod => write!(f, "zmod"),
            Backend::PolyMod => write!(f, "polymod"),
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zmod" => Ok(Backend::Zmod),
            "polymod" => Ok(Backend::PolyMod),
            other => Err(Error::Invalid(format!("unknown backend `{other}`"))),
        }
    }
}

/// An element of `O_m`, stored as its canonical code. Equality is
/// representational; elements only make sense relative to the [`RingCtx`]
/// that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    /// The canonical code in `[0, p^m)`.
    pub fn code(self) -> u32 {
        self.0
    }
}

/// Arithmetic context for `O_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingCtx {
    backend: Backend,
    p: u64,
    m: u32,
    size: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl RingCtx {
    /// Build a context. Fails on non-prime `p` or when `p^m` exceeds the
    /// enumeration bound.
    pub fn new(backend: Backend, p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut size: u64 = 1;
        for _ in 0..m {
            size = size
                .checked_mul(p)
                .ok_or(Error::BoundExceeded { needed: u64::MAX, bound: crate::enumeration_bound() })?;
            check_bound(size)?;
        }
        Ok(RingCtx { backend, p, m, size })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// Residue cardinality `q` (equals `p` for both backends).
    pub fn q(&self) -> u64 {
        self.p
    }
    /// `|O_m| = p^m`.
    pub fn size(&self) -> u64 {
        self.size
    }
    pub fn same_ring(&self, other: &RingCtx) -> bool {
        self == other
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        if self.m == 0 {
            Elem(0)
        } else {
            Elem(1)
        }
    }

    /// The uniformizer `π` (`= 0` when `m ≤ 1`).
    pub fn pi(&self) -> Elem {
        self.pi_pow(1)
    }

    /// `π^k`, with `π^k = 0` for `k ≥ m`.
    pub fn pi_pow(&self, k: u32) -> Elem {
        if k >= self.m {
            return Elem(0);
        }
        // Both backends: code p^k.
        Elem(self.p.pow(k) as u32)
    }

    // `from_` here means "element from its numeric code", not a conversion
    // constructor for `RingCtx`, so the usual self-convention does not apply.
    #[allow(clippy::wrong_self_convention)]
    pub fn from_code(&self, code: u32) -> Elem {
        assert!((code as u64) < self.size.max(1), "code out of range");
        Elem(code)
    }

    /// Image of the integer `k` under the canonical map `Z → O_m`.
    pub fn int(&self, k: i64) -> Elem {
        if self.m == 0 {
            return Elem(0);
        }
        match self.backend {
            Backend::Zmod => Elem(k.rem_euclid(self.size as i64) as u32),
            Backend::PolyMod => Elem(k.rem_euclid(self.p as i64) as u32),
        }
    }

    fn digits(&self, x: Elem) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.m as usize);
        let mut c = x.0 as u64;
        for _ in 0..self.m {
            v.push(c % self.p);
            c /= self.p;
        }
        v
    }

    // Same naming note as `from_code`: "element from its digit vector".
    #[allow(clippy::wrong_self_convention)]
    fn from_digits(&self, d: &[u64]) -> Elem {
        let mut c = 0u64;
        for &a in d.iter().rev() {
            c = c * self.p + a;
        }
        Elem(c as u32)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match self.backend {
            Backend::Zmod => Elem(((a.0 as u64 + b.0 as u64) % self.size.max(1)) as u32),
            Backend::PolyMod => {
                let (da, db) = (self.digits(a), self.digits(b));
                let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
                self.from_digits(&sum)
            }
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        match self.backend {
            Backend::Zmod => {
                if a.0 == 0 {
                    a
                } else {
                    Elem((self.size - a.0 as u64) as u32)
                }
            }
            Backend::PolyMod => {
                let d: Vec<u64> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
                self.from_digits(&d)
            }
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match self.backend {
            Backend::Zmod => Elem(((a.0 as u64 * b.0 as u64) % self.size.max(1)) as u32),
            Backend::PolyMod => {
                let (da, db) = (self.digits(a), self.digits(b));
                let m = self.m as usize;
                let mut prod = vec![0u64; m];
                for (i, &x) in da.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in db.iter().enumerate() {
                        if i + j < m {
                            prod[i + j] = (prod[i + j] + x * y) % self.p;
                        }
                    }
                }
                self.from_digits(&prod)
            }
        }
    }

    /// `π`-adic valuation, with `val(0) = m`.
    pub fn val(&self, x: Elem) -> u32 {
        if x.0 == 0 {
            return self.m;
        }
        match self.backend {
            Backend::Zmod => {
                let mut c = x.0 as u64;
                let mut v = 0;
                while c.is_multiple_of(self.p) {
                    c /= self.p;
                    v += 1;
                }
                v
            }
            Backend::PolyMod => {
                self.digits(x).iter().position(|&d| d != 0).unwrap_or(self.m as usize) as u32
            }
        }
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        // The trivial ring's only element is its own unit (0 = 1).
        self.m == 0 || self.val(x) == 0
    }

    /// Multiplicative inverse of a unit; `None` for non-units.
    pub fn inv(&self, x: Elem) -> Option<Elem> {
        if !self.is_unit(x) {
            return None;
        }
        if self.m == 0 {
            return Some(Elem(0));
        }
        match self.backend {
            Backend::Zmod => {
                // Extended Euclid mod p^m.
                let (mut r0, mut r1) = (self.size as i128, x.0 as i128);
                let (mut s0, mut s1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                debug_assert_eq!(r0, 1);
                Some(Elem(s0.rem_euclid(self.size as i128) as u32))
            }
            Backend::PolyMod => {
                // Invert the constant term mod p, then Hensel-lift:
                // y ← y·(2 − x·y) doubles the t-adic precision each round.
                let a0 = self.digits(x)[0];
                let mut inv0 = 1u64;
                for _ in 0..self.p - 2 {
                    inv0 = inv0 * a0 % self.p;
                }
                let mut y = self.from_digits(&[inv0]);
                let two = self.int(2);
                let mut prec = 1;
                while prec < self.m {
                    y = self.mul(y, self.sub(two, self.mul(x, y)));
                    prec *= 2;
                }
                Some(y)
            }
        }
    }

    /// All elements, in code order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size.max(1) as u32).map(Elem)
    }

    /// All units, in code order (the trivial ring yields `[0]`).
    pub fn units(&self) -> Vec<Elem> {
        self.elements().filter(|&x| self.is_unit(x)).collect()
    }

    /// The ideal `π^k O_m` as an element list.
    pub fn ideal(&self, k: u32) -> Vec<Elem> {
        self.elements().filter(|&x| self.val(x) >= k).collect()
    }

    /// Residue of `x` in `F_p`, as an integer in `[0, p)`.
    pub fn residue(&self, x: Elem) -> u64 {
        if self.m == 0 {
            0
        } else {
            x.0 as u64 % self.p
        }
    }

    /// Reduction `O_m → O_{m'}` for `m' ≤ m` (same backend and `p`).
    pub fn reduce_to(&self, smaller: &RingCtx, x: Elem) -> Elem {
        assert_eq!(self.backend, smaller.backend);
        assert_eq!(self.p, smaller.p);
        assert!(smaller.m <= self.m);
        Elem((x.0 as u64 % smaller.size.max(1)) as u32)
    }

    /// Canonical exact division by `π^k` (requires `val(x) ≥ k`); the result
    /// is the representative whose code is the digit/integer shift of `x`.
    pub fn div_pi_exact(&self, x: Elem, k: u32) -> Elem {
        assert!(self.val(x) >= k, "div_pi_exact: valuation too small");
        Elem((x.0 as u64 / self.p.pow(k)) as u32)
    }

    /// A generating set of the unit group, found generically (greedy maximal
    /// order), with no case analysis on `p`.
    pub fn unit_generators(&self) -> Vec<Elem> {
        let units = self.units();
        if units.len() <= 1 {
            return vec![];
        }
        let (group, _) = AbelianGroup::from_elements(&units, |&a, &b| self.mul(a, b)).unwrap();
        group.generators().into_iter().map(|i| units[i as usize]).collect()
    }
}

/// The additive character `ψ_ξ` of `(O_m, +)`.
///
/// `Zmod`: `ψ_ξ(x) = exp(2πi·lift(ξx)/p^m)`; `PolyMod`:
/// `ψ_ξ(x) = exp(2πi·a_{m−1}/p)` with `a_{m−1}` the top coefficient of `ξx`.
/// In both backends `ξ ↦ ψ_ξ` is an isomorphism onto the dual group.
#[derive(Debug, Clone)]
pub struct AdditiveChar {
    ctx: RingCtx,
    xi: Elem,
}

/// Build `ψ_ξ`. Errors for `m = 0` (the trivial ring carries no non-trivial
/// duality to express).
pub fn additive_character(ctx: &RingCtx, xi: Elem) -> Result<AdditiveChar> {
    if ctx.m() == 0 {
        return Err(Error::Invalid("additive_character requires m ≥ 1".into()));
    }
    Ok(AdditiveChar { ctx: ctx.clone(), xi })
}

impl AdditiveChar {
    pub fn xi(&self) -> Elem {
        self.xi
    }

    pub fn eval(&self, x: Elem) -> Complex64 {
        let prod = self.ctx.mul(self.xi, x);
        let angle = match self.ctx.backend {
            Backend::Zmod => TAU * prod.code() as f64 / self.ctx.size as f64,
            Backend::PolyMod => {
                let top = self.ctx.digits(prod)[self.ctx.m as usize - 1];
                TAU * top as f64 / self.ctx.p as f64
            }
        };
        Complex64::new(angle.cos(), angle.sin())
    }

    /// Value table indexed by element code.
    pub fn table(&self) -> Vec<Complex64> {
        self.ctx.elements().map(|x| self.eval(x)).collect()
    }
}

/// An explicit finite abelian group: element indices `0..n` with a dense
/// multiplication table.
#[derive(Debug, Clone)]
pub struct AbelianGroup {
    n: usize,
    mult: Vec<u32>,
    identity: u32,
    inv: Vec<u32>,
}

impl AbelianGroup {
    /// Build from an element list and a binary operation. Checks that the
    /// operation is closed, commutative, has an identity and inverses, and
    /// spot-checks associativity. Returns the group together with the
    /// element-to-index map.
    pub fn from_elements<T: Clone + Eq + std::hash::Hash>(
        elems: &[T],
        op: impl Fn(&T, &T) -> T,
    ) -> Result<(Self, HashMap<T, u32>)> {
        let n = elems.len();
        let mut index = HashMap::with_capacity(n);
        for (i, e) in elems.iter().enumerate() {
            if index.insert(e.clone(), i as u32).is_some() {
                return Err(Error::Invalid("duplicate elements in group list".into()));
            }
        }
        let mut mult = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = op(&elems[i], &elems[j]);
                let k = *index.get(&prod).ok_or(Error::NotClosed)?;
                mult[i * n + j] = k;
            }
        }
        let group = Self::from_table(n, mult)?;
        Ok((group, index))
    }

    /// Build from a dense `n×n` multiplication table (row-major, entries are
    /// element indices).
    pub fn from_table(n: usize, mult: Vec<u32>) -> Result<Self> {
        assert_eq!(mult.len(), n * n);
        // Commutativity.
        for i in 0..n {
            for j in (i + 1)..n {
                if mult[i * n + j] != mult[j * n + i] {
                    return Err(Error::NotAbelian);
                }
            }
        }
        // Identity.
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mult[e * n + x] == x as u32))
            .ok_or_else(|| Error::Invalid("no identity element".into()))? as u32;
        // Inverses.
        let mut inv = vec![u32::MAX; n];
        for i in 0..n {
            for j in 0..n {
                if mult[i * n + j] == identity {
                    inv[i] = j as u32;
                }
            }
            if inv[i] == u32::MAX {
                return Err(Error::Invalid("element without inverse".into()));
            }
        }
        // Associativity spot check on a deterministic stride (full check for
        // small n).
        let step = (n / 17).max(1);
        for i in (0..n).step_by(step) {
            for j in (0..n).step_by(step) {
                for k in (0..n).step_by(step) {
                    let ab_c = mult[mult[i * n + j] as usize * n + k];
                    let a_bc = mult[i * n + mult[j * n + k] as usize];
                    if ab_c != a_bc {
                        return Err(Error::Invalid("operation is not associative".into()));
                    }
                }
            }
        }
        Ok(AbelianGroup { n, mult, identity, inv })
    }

    pub fn order(&self) -> usize {
        self.n
    }
    pub fn identity(&self) -> u32 {
        self.identity
    }
    pub fn op(&self, i: u32, j: u32) -> u32 {
        self.mult[i as usize * self.n + j as usize]
    }
    pub fn inverse(&self, i: u32) -> u32 {
        self.inv[i as usize]
    }

    pub fn element_order(&self, i: u32) -> u64 {
        let mut x = i;
        let mut k = 1;
        while x != self.identity {
            x = self.op(x, i);
            k += 1;
        }
        k
    }

    /// A generating set in elementary-divisor style: greedily pick an element
    /// of maximal order not yet in the generated subgroup.
    pub fn generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut in_h = vec![false; self.n];
        in_h[self.identity as usize] = true;
        let mut h: Vec<u32> = vec![self.identity];
        while h.len() < self.n {
            let g = (0..self.n as u32)
                .filter(|&x| !in_h[x as usize])
                .max_by_key(|&x| self.element_order(x))
                .unwrap();
            gens.push(g);
            // Close H under g.
            let mut new_h = Vec::new();
            let mut pw = g;
            while !in_h[pw as usize] {
                for &x in &h {
                    let y = self.op(pw, x);
                    if !in_h[y as usize] {
                        in_h[y as usize] = true;
                        new_h.push(y);
                    }
                }
                pw = self.op(pw, g);
            }
            h.extend(new_h);
        }
        gens
    }

    /// The full character table, computed generically: walk an
    /// elementary-divisor generating chain (exhaustive maximal-order search)
    /// and extend characters step by step, choosing each value among the
    /// `r`-th roots of the already-determined value at `g^r`.
    ///
    /// Returns `n` value tables indexed by element index.
    pub fn dual(&self) -> Vec<Vec<Complex64>> {
        let n = self.n;
        let mut in_h = vec![false; n];
        in_h[self.identity as usize] = true;
        let mut h: Vec<u32> = vec![self.identity];
        let one = Complex64::new(1.0, 0.0);
        let mut chars: Vec<Vec<Complex64>> = vec![vec![one; n]];
        while h.len() < n {
            let g = (0..n as u32)
                .filter(|&x| !in_h[x as usize])
                .max_by_key(|&x| self.element_order(x))
                .unwrap();
            // Relative order: least r ≥ 1 with g^r in H.
            let mut r = 1u32;
            let mut pw = g;
            while !in_h[pw as usize] {
                pw = self.op(pw, g);
                r += 1;
            }
            let g_r = pw; // g^r ∈ H
            let mut new_chars = Vec::with_capacity(chars.len() * r as usize);
            for chi in &chars {
                let w = chi[g_r as usize];
                let base = w.arg();
                for j in 0..r {
                    let zeta =
                        Complex64::from_polar(1.0, (base + TAU * j as f64) / r as f64);
                    let mut table = chi.clone();
                    let mut zpow = one;
                    let mut gpow = self.identity;
                    for _ in 0..r {
                        for &x in &h {
                            table[self.op(gpow, x) as usize] = zpow * chi[x as usize];
                        }
                        zpow *= zeta;
                        gpow = self.op(gpow, g);
                    }
                    new_chars.push(table);
                }
            }
            chars = new_chars;
            // Extend H.
            let mut gpow = g;
            let mut new_h = Vec::new();
            for _ in 1..r {
                for &x in &h {
                    let y = self.op(gpow, x);
                    if !in_h[y as usize] {
                        in_h[y as usize] = true;
                        new_h.push(y);
                    }
                }
                gpow = self.op(gpow, g);
            }
            h.extend(new_h);
        }
        chars
    }
}

/// The stabilizer group `Δ^ε_m` in coordinates.
///
/// For a unit `ε` the stabilizer `{(α, β) : β = ε^{-1}(1−α)}` is parametrized
/// by its `α`-coordinate and is the unit group `O_m^×` under multiplication.
/// For a non-unit `ε` it is `{(α, β) : α = 1−εβ}`, parametrized by the
/// `β`-coordinate with the induced operation `β∘β' = β + β' − εββ'`. (For
/// `ε = 0` this is plain addition; for `ε ≠ 0` non-unit it is a twisted
/// operation that need not be isomorphic to `(O_m, +)` — e.g. `p = 2, m = 2,
/// ε = 2` gives the Klein group — so the group structure is always taken from
/// the coordinates, never assumed.)
#[derive(Debug, Clone)]
pub struct DeltaGroup {
    pub unit_case: bool,
    /// Coordinate (`α` in the unit case, `β` otherwise) of element index `i`.
    pub coords: Vec<Elem>,
    pub group: AbelianGroup,
    /// Indices of the kernel of the reduction `Δ_m → Δ_{m−1}`:
    /// `α ∈ 1 + π^{m−1}O_m` resp. `β ∈ π^{m−1}O_m`. For `m ≤ 1` this is the
    /// whole group.
    pub kernel: Vec<u32>,
}

/// Build `Δ^ε_m` from its defining coordinates.
pub fn delta_group(ctx: &RingCtx, eps: Elem) -> Result<DeltaGroup> {
    let unit_case = ctx.is_unit(eps);
    let (coords, group, index): (Vec<Elem>, AbelianGroup, HashMap<Elem, u32>) = if unit_case {
        let coords = ctx.units();
        let (g, idx) = AbelianGroup::from_elements(&coords, |&a, &b| ctx.mul(a, b))?;
        (coords, g, idx)
    } else {
        let coords: Vec<Elem> = ctx.elements().collect();
        let (g, idx) = AbelianGroup::from_elements(&coords, |&a, &b| {
            ctx.sub(ctx.add(a, b), ctx.mul(eps, ctx.mul(a, b)))
        })?;
        (coords, g, idx)
    };
    let m = ctx.m();
    let kernel_val = m.saturating_sub(1);
    let kernel = coords
        .iter()
        .filter(|&&c| {
            let rel = if unit_case { ctx.sub(c, ctx.one()) } else { c };
            ctx.val(rel) >= kernel_val
        })
        .map(|c| index[c])
        .collect();
    Ok(DeltaGroup { unit_case, coords, group, kernel })
}

/// `true` iff the character `σ` (a value table indexed like
/// [`DeltaGroup::coords`]) factors through `Δ^ε_{m−1}`, i.e. is trivial on the
/// reduction kernel. For `m = 1` this means `σ` is trivial.
pub fn is_pullback(delta: &DeltaGroup, sigma: &[Complex64]) -> bool {
    delta
        .kernel
        .iter()
        .all(|&i| (sigma[i as usize] - Complex64::new(1.0, 0.0)).norm() < 1e-6)
}

/// Closed form for the number of characters of `Δ^δ_m` that are *not*
/// pullbacks from level `m−1`: unit `δ`: `q−2` for `m = 1`,
/// `q^{m−2}(q−1)²` for `m ≥ 2`; non-unit `δ`: `q^m − q^{m−1}`.
pub fn new_character_count(q: u64, m: u32, unit_case: bool) -> u64 {
    if m == 0 {
        return 0;
    }
    if unit_case {
        if m == 1 {
            q - 2
        } else {
            q.pow(m - 2) * (q - 1) * (q - 1)
        }
    } else {
        q.pow(m) - q.pow(m - 1)
    }
}
