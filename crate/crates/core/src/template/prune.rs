use super::{Template, TemplateError};
use crate::laurent::{LaurentSystem, MonomialSet};

/// Removes the excessive columns that are linearly dependent on earlier ones
/// (greedy, grevlex column order) and keeps a maximal set of rows that is
/// independent on the E | R columns. Rows whose only contribution is a
/// relation among basis monomials are dropped, so the result satisfies
/// `#cols - #rows = #B`.
pub fn prune_excessive_columns(system: &LaurentSystem<u32>, template: &Template) -> Result<Template, TemplateError> {
    let out = prune_unchecked(system, template)?;
    let (r, c) = out.size();
    let b = out.basis().len();
    if c < r || c - r != b {
        return Err(TemplateError::IdentityViolation { rows: r, cols: c, basis: b });
    }
    Ok(out)
}

/// Pruning without the final identity check; also used to rank candidates.
pub(crate) fn prune_unchecked(system: &LaurentSystem<u32>, template: &Template) -> Result<Template, TemplateError> {
    let matrix = template.exact_matrix(system)?;
    let e = template.partition.excessive.len();
    let r = template.partition.reducible.len();

    let block: Vec<usize> = (0..e).collect();
    let dependent = matrix.dependent_columns(&block);
    let keep_e: Vec<usize> = (0..e).filter(|c| !dependent.contains(c)).collect();
    let e_kept = keep_e.len();
    let front: Vec<usize> = keep_e.iter().copied().chain(e..e + r).collect();
    let keep_rows = matrix.select_columns(&front).independent_rows();

    let mut partition = template.partition.clone();
    let excessive = template.partition.excessive.as_slice();
    partition.excessive = MonomialSet::from_monomials(keep_e.iter().map(|&i| excessive[i].clone()));
    let dropped = template
        .dropped
        .union(&MonomialSet::from_monomials(dependent.iter().map(|&i| excessive[i].clone())));

    // recompute the reduced block on the kept rows and columns
    let cols: Vec<usize> = front.iter().copied().chain(e + r..matrix.cols()).collect();
    let pruned = matrix.select_rows(&keep_rows).select_columns(&cols);
    let rref = pruned.rref();
    let nb = template.partition.basis.len();
    let r_rows: Vec<usize> = rref
        .pivots
        .iter()
        .enumerate()
        .filter(|(_, &c)| c >= e_kept && c < e_kept + r)
        .map(|(i, _)| i)
        .collect();
    if r_rows.len() != r {
        return Err(TemplateError::Mismatch("reducible monomials lost their pivots".into()));
    }
    let b_cols: Vec<usize> = (e_kept + r..e_kept + r + nb).collect();
    let reduced_block = rref.matrix.select_rows(&r_rows).select_columns(&b_cols);

    Ok(Template {
        partition,
        rows: keep_rows.iter().map(|&i| template.rows[i].clone()).collect(),
        dropped,
        reduced_block,
        ..template.clone()
    })
}
