//! Exact differential operators, automorphisms and skew group algebras of
//! finite field extensions `L/K` in characteristic `p`.
//!
//! ```
//! use bext::basefield::BaseField;
//! use bext::galois::{classify, Analysis};
//! use bext::tower::ExtensionTower;
//!
//! let k = BaseField::new(2, &["t"]).unwrap();
//! let l = ExtensionTower::new(k).extend_parsed("u", "u^2 + t").unwrap().extend_parsed("s", "s^2 + s + t").unwrap();
//! let an = Analysis::new(&l).unwrap();
//! assert_eq!(an.d.dim(), 8);
//! assert_eq!(an.group.order(), 2);
//! let rec = classify(&l).unwrap();
//! assert!(rec.is_b && !rec.is_g && !rec.is_d);
//! ```

pub mod basefield;
pub mod differential;
pub mod exlinalg;
pub mod field;
pub mod galois;
pub mod harness;
pub mod matalg;
pub mod tower;
