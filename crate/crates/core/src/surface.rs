//! Closed connected surfaces up to diffeomorphism.
//!
//! A class is stored as classification data only: orientability plus genus.
//! Edge labels map onto classes by sign: `r >= 0` is the orientable surface
//! of genus `r`, `r < 0` is the non-orientable surface `N_|r|`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Diffeomorphism class of a closed connected surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceClass {
    orientable: bool,
    genus: u64,
}

const MAX_ORIENTABLE_GENUS: u64 = i64::MAX as u64;
const MAX_NONORIENTABLE_GENUS: u64 = 1 << 63;

impl SurfaceClass {
    pub const SPHERE: SurfaceClass = SurfaceClass { orientable: true, genus: 0 };
    pub const TORUS: SurfaceClass = SurfaceClass { orientable: true, genus: 1 };
    pub const PROJECTIVE_PLANE: SurfaceClass = SurfaceClass { orientable: false, genus: 1 };
    pub const KLEIN_BOTTLE: SurfaceClass = SurfaceClass { orientable: false, genus: 2 };

    /// Connected sum of `genus` tori (the sphere for `genus == 0`).
    pub fn orientable(genus: u64) -> Option<Self> {
        (genus <= MAX_ORIENTABLE_GENUS).then_some(SurfaceClass { orientable: true, genus })
    }

    /// Connected sum of `genus` projective planes; `genus` must be at least 1.
    pub fn non_orientable(genus: u64) -> Option<Self> {
        (1..=MAX_NONORIENTABLE_GENUS).contains(&genus).then_some(SurfaceClass { orientable: false, genus })
    }

    pub fn is_orientable(&self) -> bool {
        self.orientable
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn is_sphere(&self) -> bool {
        *self == Self::SPHERE
    }

    /// Surface encoded by an edge label.
    pub fn from_label(label: i64) -> Self {
        if label >= 0 {
            SurfaceClass { orientable: true, genus: label as u64 }
        } else {
            SurfaceClass { orientable: false, genus: label.unsigned_abs() }
        }
    }

    /// Edge label encoding this surface. Inverse of [`SurfaceClass::from_label`].
    pub fn to_label(&self) -> i64 {
        if self.orientable {
            self.genus as i64
        } else {
            (-(self.genus as i128)) as i64
        }
    }

    /// `2 - 2g` for orientable surfaces, `2 - k` otherwise.
    pub fn euler_char(&self) -> i128 {
        if self.orientable {
            2 - 2 * self.genus as i128
        } else {
            2 - self.genus as i128
        }
    }

    /// Recovers a class from its orientability and Euler characteristic.
    pub fn from_euler_char(orientable: bool, chi: i128) -> Option<Self> {
        let deficit = 2 - chi;
        if deficit < 0 {
            return None;
        }
        if orientable {
            if deficit % 2 != 0 {
                return None;
            }
            u64::try_from(deficit / 2).ok().and_then(Self::orientable)
        } else {
            u64::try_from(deficit).ok().and_then(Self::non_orientable)
        }
    }

    /// Connected sum. Orientable iff both summands are, and
    /// `chi(a # b) = chi(a) + chi(b) - 2`.
    ///
    /// Panics if the resulting genus leaves the representable range.
    pub fn connected_sum(self, other: SurfaceClass) -> SurfaceClass {
        let orientable = self.orientable && other.orientable;
        let chi = self.euler_char() + other.euler_char() - 2;
        Self::from_euler_char(orientable, chi).expect("surface genus overflow in connected sum")
    }

    /// Connected sum with `count` Klein bottles.
    pub fn attach_klein(self, count: u64) -> SurfaceClass {
        self.attach_repeated(Self::KLEIN_BOTTLE, count)
    }

    /// Connected sum with `count` tori.
    pub fn attach_torus(self, count: u64) -> SurfaceClass {
        self.attach_repeated(Self::TORUS, count)
    }

    fn attach_repeated(self, summand: SurfaceClass, count: u64) -> SurfaceClass {
        let drop = (2 - summand.euler_char()) * count as i128;
        let orientable = self.orientable && (count == 0 || summand.orientable);
        Self::from_euler_char(orientable, self.euler_char() - drop).expect("surface genus overflow in attachment")
    }

    /// Human-readable name, used for DOT captions and reports.
    pub fn caption(&self) -> String {
        match (self.orientable, self.genus) {
            (true, 0) => "sphere".to_string(),
            (true, 1) => "torus".to_string(),
            (true, g) => format!("genus {g}"),
            (false, 1) => "projective plane (N1)".to_string(),
            (false, 2) => "Klein bottle (N2)".to_string(),
            (false, k) => format!("nonor. genus {k}"),
        }
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orientable {
            write!(f, "S{}", self.genus)
        } else {
            write!(f, "N{}", self.genus)
        }
    }
}

/// Serialized as the edge label that encodes the class.
impl Serialize for SurfaceClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.to_label())
    }
}

impl<'de> Deserialize<'de> for SurfaceClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        i64::deserialize(deserializer).map(SurfaceClass::from_label)
    }
}

/// Sorted copy of a multiset of classes, for order-insensitive comparison.
pub fn sorted(classes: &[SurfaceClass]) -> Vec<SurfaceClass> {
    let mut out = classes.to_vec();
    out.sort();
    out
}

/// Sum of Euler characteristics over a level set.
pub fn total_euler_char(classes: &[SurfaceClass]) -> i128 {
    classes.iter().map(SurfaceClass::euler_char).sum()
}
