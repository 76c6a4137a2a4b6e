//! A layout engine for AmS-TeX math notation.
//!
//! The pipeline is tokenize → parse → layout → render: the parser produces a
//! [`ast::MathList`] from the math-mode command language, the layout stage
//! turns it into a [`boxes::BoxNode`] tree with TeX's box-and-glue model, and
//! the renderers emit a deterministic box dump, MathML Core, or SVG.

pub mod ast;
pub mod boxes;
pub mod cd;
pub mod config;
pub mod constants;
pub mod dim;
pub mod display;
pub mod dots;
pub mod error;
pub mod layout;
pub mod mathml;
pub mod metrics;
pub mod parser;
pub mod render;
pub mod spacing;
pub mod style;
pub mod svg;
pub mod symbols;
pub mod token;

pub use crate::dim::{dim_to_mu_units, mu_to_dim, Dim, Mu};
pub use crate::style::{Style, StyleLevel};
