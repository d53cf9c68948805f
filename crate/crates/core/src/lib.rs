//! Automatic elimination-template generation for families of Laurent
//! polynomial systems, and the action-matrix solver that uses the templates.
//!
//! The offline generator works over a prime field ([`field::PrimeField`]):
//! [`template::template_finder`] searches shift sets and action monomials,
//! [`template::template_reduction`] removes unnecessary shifts, and
//! [`template::prune_excessive_columns`] drops dependent columns. The online
//! phase in [`numeric`] fills a template with real coefficients and extracts
//! roots from the eigenvectors of the action matrix.

pub mod corpus;
pub mod field;
pub mod gf;
pub mod laurent;
pub mod numeric;
pub mod oracle;
pub mod template;
