/// Row-major odometer over a box `[0, dims[0]) x ... x [0, dims[k-1])`.
///
/// Returns `false` once the index wraps around past the last element.
pub(crate) fn advance(index: &mut [usize], dims: &[usize]) -> bool {
    for pos in (0..index.len()).rev() {
        index[pos] += 1;
        if index[pos] < dims[pos] {
            return true;
        }
        index[pos] = 0;
    }
    false
}

/// Calls `f` for every index of the box in lexicographic order.
pub(crate) fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.contains(&0) {
        return;
    }
    let mut idx = vec![0; dims.len()];
    loop {
        f(&idx);
        if !advance(&mut idx, dims) {
            break;
        }
    }
}
