//! The two reference systems used throughout the tests and documentation.
//!
//! `M1`: `u` and `v` fire the same two `t1` distributions, but `v1` can take
//! one further `t2` step. `M2`: two three-level chains whose degrees differ
//! slightly; `u`'s side loops back from `u4` to `u2`.

use crate::format::parse_model;
use crate::model::Nfts;

pub const M1_TEXT: &str = "\
states: u u1 u2 u3 v v1 v2 v3 v4
labels: t1 t2
trans u t1 { u1: 0.2, u2: 0.7 }
trans u t1 { u2: 0.9, u3: 1 }
trans v t1 { v1: 0.2, v2: 0.7 }
trans v t1 { v2: 0.9, v3: 1 }
trans v1 t2 { v4: 0.1 }
";

pub const M2_TEXT: &str = "\
states: u u1 u2 u3 u4 v v1 v2 v3 v4 v5
labels: t1 t2 t3
trans u t1 { u1: 0.2, u2: 0.7 }
trans u1 t2 { u3: 0.3 }
trans u2 t2 { u4: 0.4 }
trans u4 t3 { u2: 0.4 }
trans v t1 { v1: 0.2, v2: 0.7 }
trans v1 t2 { v3: 0.4 }
trans v2 t2 { v4: 0.6 }
trans v4 t3 { v5: 0.3 }
";

pub fn m1() -> Nfts {
    parse_model(M1_TEXT).expect("M1 is well-formed")
}

pub fn m2() -> Nfts {
    parse_model(M2_TEXT).expect("M2 is well-formed")
}
