//! The cone `C = {(c₁,c₂,c₃) ∈ N₀³ : c₁, c₂ ≤ c₃ ≤ c₁ + c₂}` indexing the
//! summands `V_c` of the flag permutation module, its invariants
//!
//! ```text
//! λ(c) = c₃,   κ(c) = c₁ + c₂ − c₃,   μ(c) = min(κ, c₃ − c₁, c₃ − c₂),
//! ```
//!
//! the interior/boundary split, the equivalence relation `V_c ≃ V_d`
//! (`λ, κ, μ` agree, and `c = d` whenever `κ > μ`), and class-size /
//! class-count combinatorics.
//!
//! Class sizes follow the closed form
//!
//! ```text
//! a(m, k, ℓ) = ℓ − 3k + 1   if k = m and ℓ ≥ 3k,
//!              1            if ℓ ≥ 2m + k > 3m,
//!              0            otherwise,
//! ```
//!
//! while class *counts* are always computed enumeratively, never from a
//! formula.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A point of the cone `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConePoint {
    c1: u32,
    c2: u32,
    c3: u32,
}

/// The invariant triple `(μ, κ, λ)` of a cone point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Invariants {
    pub mu: u32,
    pub kappa: u32,
    pub level: u32,
}

/// Interior (`μ ≥ 1`) or boundary of the cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Interior,
    Boundary,
}

impl std::fmt::Display for ConePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.c1, self.c2, self.c3)
    }
}

impl ConePoint {
    /// Validated constructor: requires `c₁, c₂ ≤ c₃ ≤ c₁ + c₂`.
    pub fn new(c1: u32, c2: u32, c3: u32) -> Result<Self> {
        if c1 <= c3 && c2 <= c3 && c3 <= c1 + c2 {
            Ok(ConePoint { c1, c2, c3 })
        } else {
            Err(Error::InvalidConePoint(c1, c2, c3))
        }
    }

    pub fn c1(&self) -> u32 {
        self.c1
    }
    pub fn c2(&self) -> u32 {
        self.c2
    }
    pub fn c3(&self) -> u32 {
        self.c3
    }
    pub fn coords(&self) -> (u32, u32, u32) {
        (self.c1, self.c2, self.c3)
    }

    pub fn invariants(&self) -> Invariants {
        let level = self.c3;
        let kappa = self.c1 + self.c2 - self.c3;
        let mu = kappa.min(self.c3 - self.c1).min(self.c3 - self.c2);
        Invariants { mu, kappa, level }
    }

    pub fn level(&self) -> u32 {
        self.c3
    }

    pub fn region(&self) -> Region {
        if self.c1 < self.c3 && self.c2 < self.c3 && self.c3 < self.c1 + self.c2 {
            Region::Interior
        } else {
            Region::Boundary
        }
    }

    /// Componentwise subtraction of `k·(1,1,1)`; `None` if the result leaves
    /// the cone (which happens exactly when `k > μ(c)`).
    pub fn minus_rho(&self, k: u32) -> Option<ConePoint> {
        if k > self.c1 || k > self.c2 || k > self.c3 {
            return None;
        }
        ConePoint::new(self.c1 - k, self.c2 - k, self.c3 - k).ok()
    }
}

/// `V_c ≃ V_d`: the invariant triples agree, and additionally `c = d` when
/// `κ > μ`.
pub fn equivalent(c: &ConePoint, d: &ConePoint) -> bool {
    let (ic, id) = (c.invariants(), d.invariants());
    ic == id && (ic.kappa == ic.mu || c == d)
}

/// Closed-form size `a(μ, κ, λ)` of an equivalence class with the given
/// invariants; 0 if no class has these invariants.
pub fn class_size(mu: u32, kappa: u32, level: u32) -> u64 {
    if kappa == mu && level >= 3 * kappa {
        (level - 3 * kappa + 1) as u64
    } else if kappa > mu && level >= 2 * mu + kappa {
        1
    } else {
        0
    }
}

/// All cone points at the given level, lexicographic in `(c₁, c₂)`; there are
/// `(ℓ+1)(ℓ+2)/2` of them.
pub fn enumerate_level(level: u32) -> Vec<ConePoint> {
    let mut out = Vec::new();
    for c1 in 0..=level {
        for c2 in (level - c1)..=level {
            out.push(ConePoint { c1, c2, c3: level });
        }
    }
    out
}

/// All cone points with level ≤ `max_level`, by level then lexicographic.
pub fn enumerate_up_to(max_level: u32) -> Vec<ConePoint> {
    (0..=max_level).flat_map(enumerate_level).collect()
}

/// An equivalence class of cone points at one level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeClass {
    /// Canonical representative: `(2μ, λ−μ, λ)` for `κ = μ` classes, the
    /// unique member otherwise.
    pub rep: ConePoint,
    pub members: Vec<ConePoint>,
    pub invariants: Invariants,
}

/// Group the level-`ℓ` points into equivalence classes, each with its
/// canonical representative. Class order follows the first member in
/// enumeration order.
pub fn classes_at_level(level: u32) -> Vec<ConeClass> {
    let points = enumerate_level(level);
    let mut classes: Vec<ConeClass> = Vec::new();
    for p in points {
        match classes.iter_mut().find(|cl| equivalent(&cl.rep, &p)) {
            Some(cl) => cl.members.push(p),
            None => {
                let inv = p.invariants();
                let rep = if inv.kappa == inv.mu {
                    ConePoint::new(2 * inv.mu, inv.level - inv.mu, inv.level).unwrap()
                } else {
                    p
                };
                classes.push(ConeClass { rep, members: vec![p], invariants: inv });
            }
        }
    }
    classes
}

/// Number of equivalence classes with the exact invariant triple
/// `(μ, κ, λ)`, by exhaustive enumeration and grouping.
pub fn count_classes_with_invariants(mu: u32, kappa: u32, level: u32) -> u64 {
    classes_at_level(level)
        .iter()
        .filter(|cl| cl.invariants.mu == mu && cl.invariants.kappa == kappa)
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_is_validated() {
        assert!(ConePoint::new(1, 0, 1).is_ok());
        assert!(ConePoint::new(0, 0, 1).is_err()); // c3 > c1+c2
        assert!(ConePoint::new(2, 1, 1).is_err()); // c1 > c3
    }

    #[test]
    fn invariant_examples() {
        let inv = ConePoint::new(1, 0, 1).unwrap().invariants();
        assert_eq!((inv.mu, inv.kappa, inv.level), (0, 0, 1));
        let inv = ConePoint::new(2, 2, 3).unwrap().invariants();
        assert_eq!((inv.mu, inv.kappa, inv.level), (1, 1, 3));
        let inv = ConePoint::new(4, 5, 6).unwrap().invariants();
        assert_eq!((inv.mu, inv.kappa, inv.level), (1, 3, 6));
    }

    #[test]
    fn region_examples() {
        assert_eq!(ConePoint::new(2, 2, 3).unwrap().region(), Region::Interior);
        assert_eq!(ConePoint::new(2, 1, 2).unwrap().region(), Region::Boundary);
        assert_eq!(ConePoint::new(1, 1, 2).unwrap().region(), Region::Boundary);
    }

    /// Interior ⇔ μ ≥ 1 (strict inequalities versus the invariant).
    #[test]
    fn interior_iff_mu_positive() {
        for c in enumerate_up_to(8) {
            assert_eq!(
                c.region() == Region::Interior,
                c.invariants().mu >= 1,
                "mismatch at {c}"
            );
        }
    }

    #[test]
    fn equivalence_examples() {
        let eq = |a: (u32, u32, u32), b: (u32, u32, u32)| {
            equivalent(
                &ConePoint::new(a.0, a.1, a.2).unwrap(),
                &ConePoint::new(b.0, b.1, b.2).unwrap(),
            )
        };
        assert!(eq((2, 3, 4), (3, 2, 4))); // κ = μ = 1
        assert!(!eq((5, 3, 6), (3, 5, 6))); // κ = 2 > μ = 1, c ≠ d
        assert!(!eq((1, 2, 2), (2, 1, 2))); // κ = 1 > μ = 0
    }

    #[test]
    fn equivalence_is_an_equivalence_relation() {
        for level in 0..=8 {
            let pts = enumerate_level(level);
            for a in &pts {
                assert!(equivalent(a, a));
                for b in &pts {
                    assert_eq!(equivalent(a, b), equivalent(b, a));
                    for c in &pts {
                        if equivalent(a, b) && equivalent(b, c) {
                            assert!(equivalent(a, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn class_size_examples() {
        assert_eq!(class_size(0, 0, 2), 3);
        assert_eq!(class_size(1, 2, 5), 1);
        assert_eq!(class_size(1, 2, 3), 0); // 2m+k = 4 > 3
        assert_eq!(class_size(1, 1, 3), 1);
        assert_eq!(class_size(1, 1, 4), 2);
        assert_eq!(class_size(0, 1, 1), 1);
        assert_eq!(class_size(1, 2, 6), 1);
        assert_eq!(class_size(2, 1, 9), 0); // μ > κ is impossible
    }

    #[test]
    fn class_count_examples() {
        assert_eq!(count_classes_with_invariants(0, 1, 2), 2); // {(1,2,2)}, {(2,1,2)}
        assert_eq!(count_classes_with_invariants(1, 1, 4), 1); // {(2,3,4),(3,2,4)}
        assert_eq!(count_classes_with_invariants(0, 2, 2), 1); // {(2,2,2)}
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_level(0), vec![ConePoint::new(0, 0, 0).unwrap()]);
        assert_eq!(
            enumerate_level(1),
            vec![
                ConePoint::new(0, 1, 1).unwrap(),
                ConePoint::new(1, 0, 1).unwrap(),
                ConePoint::new(1, 1, 1).unwrap(),
            ]
        );
        for level in 0..=12u32 {
            let pts = enumerate_level(level);
            assert_eq!(pts.len() as u32, (level + 1) * (level + 2) / 2);
            // Cross-check against a raw filter of N₀³.
            let brute = (0..=level)
                .flat_map(|c1| (0..=level).map(move |c2| (c1, c2)))
                .filter(|&(c1, c2)| c1 + c2 >= level)
                .count();
            assert_eq!(pts.len(), brute);
        }
    }

    /// Every class observed by enumeration has the closed-form size, and the
    /// class partition exhausts the level set.
    #[test]
    fn class_sizes_match_closed_form() {
        for level in 0..=8 {
            let classes = classes_at_level(level);
            let total: usize = classes.iter().map(|cl| cl.members.len()).sum();
            assert_eq!(total as u32, (level + 1) * (level + 2) / 2);
            for cl in &classes {
                let inv = cl.invariants;
                assert_eq!(
                    cl.members.len() as u64,
                    class_size(inv.mu, inv.kappa, inv.level),
                    "class {:?} at level {level}",
                    cl.rep
                );
                // Canonical representative of a κ=μ class is a member.
                assert!(cl.members.contains(&cl.rep));
                for m in &cl.members {
                    assert!(equivalent(&cl.rep, m));
                }
            }
        }
    }

    /// Observed class counts: 1 class when κ=μ (λ ≥ 3μ); for κ>μ: 2 classes
    /// when λ > 2μ+κ, 1 when λ = 2μ+κ, 0 below.
    #[test]
    fn class_counts_match_expected_pattern() {
        for level in 0..=8u32 {
            for mu in 0..=level {
                for kappa in mu..=level {
                    let got = count_classes_with_invariants(mu, kappa, level);
                    let expected = if kappa == mu {
                        u64::from(level >= 3 * mu)
                    } else if level > 2 * mu + kappa {
                        2
                    } else if level == 2 * mu + kappa {
                        1
                    } else {
                        0
                    };
                    assert_eq!(got, expected, "(μ,κ,λ)=({mu},{kappa},{level})");
                }
            }
        }
    }

    /// Σ over invariant triples of class_size · class_count = level-set size.
    #[test]
    fn sizes_times_counts_exhaust_each_level() {
        for level in 0..=8u32 {
            let mut total = 0u64;
            for mu in 0..=level {
                for kappa in mu..=level {
                    total += class_size(mu, kappa, level)
                        * count_classes_with_invariants(mu, kappa, level);
                }
            }
            assert_eq!(total as u32, (level + 1) * (level + 2) / 2);
        }
    }

    /// For 0 < x+y−z < min(x,y): κ ≤ ⌊min(x,y)/2⌋ ⇔ μ = κ.
    #[test]
    fn half_min_condition_characterizes_kappa_eq_mu() {
        for x in 0..=8u32 {
            for y in 0..=8u32 {
                for z in 0..=(x + y) {
                    let kappa = (x + y).wrapping_sub(z);
                    if !(z <= x + y && kappa > 0 && kappa < x.min(y)) {
                        continue;
                    }
                    let c = ConePoint::new(x, y, z).unwrap();
                    let inv = c.invariants();
                    assert_eq!(inv.kappa, kappa);
                    assert_eq!(kappa <= x.min(y) / 2, inv.mu == inv.kappa, "at {c}");
                }
            }
        }
    }

    #[test]
    fn minus_rho_tracks_mu() {
        let c = ConePoint::new(2, 2, 3).unwrap();
        assert_eq!(c.minus_rho(1).unwrap(), ConePoint::new(1, 1, 2).unwrap());
        assert!(c.minus_rho(2).is_none()); // μ = 1
        let d = ConePoint::new(4, 4, 6).unwrap();
        assert!(d.minus_rho(2).is_some()); // μ = 2
        assert!(d.minus_rho(3).is_none());
    }
}
