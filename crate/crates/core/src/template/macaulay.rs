use std::collections::HashMap;

use super::TemplateError;
use crate::field::PrimeField;
use crate::gf::ExactMatrix;
use crate::laurent::{LaurentPoly, Monomial};

/// Macaulay matrix: entry `(i, j)` is the coefficient of row polynomial `i`
/// at `columns[j]`. Columns not used by any row stay zero.
pub fn build_macaulay<'a, I>(field: PrimeField, rows: I, columns: &[Monomial]) -> Result<ExactMatrix, TemplateError>
where
    I: IntoIterator<Item = &'a LaurentPoly<u32>>,
    I::IntoIter: ExactSizeIterator,
{
    let index: HashMap<&Monomial, usize> = columns.iter().enumerate().map(|(j, m)| (m, j)).collect();
    let rows = rows.into_iter();
    let mut mat = ExactMatrix::zeros(field, rows.len(), columns.len());
    for (i, f) in rows.enumerate() {
        for (m, c) in f.terms() {
            let j = *index
                .get(m)
                .ok_or_else(|| TemplateError::MissingMonomial(format!("{m:?}")))?;
            mat.set(i, j, *c);
        }
    }
    Ok(mat)
}
