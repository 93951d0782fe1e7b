use serde::Serialize;

use super::expansion::SymbolExpansion;
use super::poly::XiPoly;

/// Parity of the `|ξ|` exponents in one homogeneous component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ParityClass {
    /// Zero component, which lies in both classes.
    Zero,
    /// Every term has an even `|ξ|` exponent.
    Even,
    /// Every term has an odd `|ξ|` exponent.
    Odd,
    Neither,
}

impl ParityClass {
    pub fn of(p: &XiPoly) -> Self {
        let mut even = false;
        let mut odd = false;
        for (m, _) in p.terms() {
            if m.norm.rem_euclid(2) == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (false, false) => Self::Zero,
            (true, false) => Self::Even,
            (false, true) => Self::Odd,
            (true, true) => Self::Neither,
        }
    }

    pub fn is_even(self) -> bool {
        matches!(self, Self::Zero | Self::Even)
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Self::Zero | Self::Odd)
    }
}

/// Per-component parity, highest degree first.
pub fn parity_class(s: &SymbolExpansion) -> Vec<(i32, ParityClass)> {
    s.components().map(|(k, p)| (k, ParityClass::of(p))).collect()
}

/// Every component has even `|ξ|` exponents.
pub fn is_even_class(s: &SymbolExpansion) -> bool {
    s.components().all(|(_, p)| ParityClass::of(p).is_even())
}

/// Every component has odd `|ξ|` exponents.
pub fn is_odd_class(s: &SymbolExpansion) -> bool {
    s.components().all(|(_, p)| ParityClass::of(p).is_odd())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RealityClass {
    /// Component `top − j` has real-valued coefficient functions for `j` even
    /// and purely imaginary ones for `j` odd.
    CClass,
    No,
}

/// Reality test against the basis of ordered gamma words.
pub fn reality_class(s: &SymbolExpansion) -> RealityClass {
    let ok = s.components().all(|(k, p)| {
        let even = (s.top() - k) % 2 == 0;
        p.terms().all(|(_, c)| {
            c.coeffs().all(|(_, f)| {
                if even {
                    f.is_real_valued()
                } else {
                    f.is_imaginary_valued()
                }
            })
        })
    });
    if ok {
        RealityClass::CClass
    } else {
        RealityClass::No
    }
}
