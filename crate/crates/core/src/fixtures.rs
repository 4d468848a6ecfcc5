//! Bundled algebra files and a few frequently used exact elements.

use crate::lie::{load_algebra, LieAlgebra};
use crate::poly::{Coords, Polynomial};
use crate::ratio::rat;

pub const SL2: &str = include_str!("../fixtures/sl2.alg");
pub const HEIS3: &str = include_str!("../fixtures/heis3.alg");
pub const ABELIAN3: &str = include_str!("../fixtures/abelian3.alg");
pub const SOLV2: &str = include_str!("../fixtures/solv2.alg");

pub const NAMES: [&str; 4] = ["sl2", "heis3", "abelian3", "solv2"];

/// Source text of a bundled algebra file.
pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "sl2" => Some(SL2),
        "heis3" => Some(HEIS3),
        "abelian3" => Some(ABELIAN3),
        "solv2" => Some(SOLV2),
        _ => None,
    }
}

/// Loads a bundled algebra by name.
pub fn load_bundled(name: &str) -> Option<LieAlgebra> {
    bundled(name).map(|doc| load_algebra(doc).expect("bundled algebra files are valid"))
}

/// The sl2 Casimir `4·x_e·x_f + x_h²` in the bundled basis order (e, h, f).
pub fn sl2_casimir() -> Polynomial {
    let mut p = Polynomial::zero(3, Coords::X);
    p.add_term(vec![1, 0, 1], rat(4));
    p.add_term(vec![0, 2, 0], rat(1));
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundles_load() {
        for name in NAMES {
            let algebra = load_bundled(name).unwrap();
            assert_eq!(algebra.name(), name);
        }
        assert!(load_bundled("nope").is_none());
    }
}
