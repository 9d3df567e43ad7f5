//! Exact arithmetic in `Z[√2]` and the maximal-order analysis of Stern's
//! diatomic sequence and Northshield's √2 analogue.
//!
//! ```
//! use northshield::envelope::check_log_bound;
//! use northshield::sequences::{interval_max_closed_form, northshield};
//!
//! assert_eq!(northshield(14).to_string(), "5√2");
//! assert_eq!(interval_max_closed_form(3).max_value, northshield(14));
//! assert!(check_log_bound(2, 729).unwrap().passed());
//! ```
//!
//! The guide in `book/` walks through each module; its snippets run as
//! doctests of this crate.

pub mod envelope;
pub mod format;
pub mod json;
pub mod jsr;
pub mod linrep;
pub mod quadfield;
pub mod sequences;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quadratic-field.md")]
    mod quadratic_field {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    mod sequences {}
    #[doc = include_str!("../../../book/src/linear-representations.md")]
    mod linear_representations {}
    #[doc = include_str!("../../../book/src/envelope.md")]
    mod envelope {}
    #[doc = include_str!("../../../book/src/joint-spectral-radius.md")]
    mod joint_spectral_radius {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
