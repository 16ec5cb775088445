use rayon::join;

const SEQUENTIAL_GROUPS: usize = 32;

/// Calls `f(&mut slice[i], g)` for every `(i, g)` in `groups`, in parallel.
/// `groups` must be sorted by index with no index repeated.
pub fn for_each_indexed_mut<T, G, F>(slice: &mut [T], groups: &[(usize, G)], f: &F)
where
    T: Send,
    G: Sync,
    F: Fn(&mut T, &G) + Sync,
{
    debug_assert!(groups.windows(2).all(|w| w[0].0 < w[1].0));
    split_apply(slice, 0, groups, f);
}

fn split_apply<T, G, F>(slice: &mut [T], offset: usize, groups: &[(usize, G)], f: &F)
where
    T: Send,
    G: Sync,
    F: Fn(&mut T, &G) + Sync,
{
    if groups.len() <= SEQUENTIAL_GROUPS {
        for (i, g) in groups {
            f(&mut slice[i - offset], g);
        }
        return;
    }
    let mid = groups.len() / 2;
    let cut = groups[mid].0 - offset;
    let (left, right) = slice.split_at_mut(cut);
    let (lg, rg) = groups.split_at(mid);
    join(
        || split_apply(left, offset, lg, f),
        || split_apply(right, offset + cut, rg, f),
    );
}

/// Groups `(key, value)` pairs by key; output sorted by key.
pub fn group_by_key<V: Send>(mut pairs: Vec<(usize, V)>) -> Vec<(usize, Vec<V>)> {
    use rayon::slice::ParallelSliceMut;
    pairs.par_sort_by_key(|p| p.0);
    let mut out: Vec<(usize, Vec<V>)> = Vec::new();
    for (k, v) in pairs {
        match out.last_mut() {
            Some((last, vs)) if *last == k => vs.push(v),
            _ => out.push((k, vec![v])),
        }
    }
    out
}
