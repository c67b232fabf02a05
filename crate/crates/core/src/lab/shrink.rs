use crate::multiset::PictureFuzzyMultiset;

/// Greedily removes grid nodes and levels while `fails` keeps returning true.
///
/// Moves tried, in order: drop node `j` from every instance at once (when
/// all instances share a grid size), drop node `j` from one instance, then
/// the same two moves for levels. The result is locally minimal: no single
/// move keeps it failing.
pub fn shrink<F>(mut instances: Vec<PictureFuzzyMultiset>, fails: F) -> Vec<PictureFuzzyMultiset>
where
    F: Fn(&[PictureFuzzyMultiset]) -> bool,
{
    debug_assert!(fails(&instances));
    while let Some(smaller) = candidates(&instances).into_iter().find(|c| fails(c)) {
        instances = smaller;
    }
    instances
}

fn candidates(instances: &[PictureFuzzyMultiset]) -> Vec<Vec<PictureFuzzyMultiset>> {
    let mut out = Vec::new();
    let shared_len = instances
        .iter()
        .all(|d| d.len() == instances[0].len())
        .then(|| instances[0].len());
    let shared_depth = instances
        .iter()
        .all(|d| d.depth() == instances[0].depth())
        .then(|| instances[0].depth());

    if let Some(len) = shared_len.filter(|_| instances.len() > 1) {
        for j in 0..len {
            if let Some(c) = instances.iter().map(|d| d.without_node(j)).collect() {
                out.push(c);
            }
        }
    }
    for (i, d) in instances.iter().enumerate() {
        for j in 0..d.len() {
            if let Some(smaller) = d.without_node(j) {
                let mut c = instances.to_vec();
                c[i] = smaller;
                out.push(c);
            }
        }
    }
    if let Some(depth) = shared_depth.filter(|_| instances.len() > 1) {
        for k in 1..=depth {
            if let Some(c) = instances.iter().map(|d| d.without_level(k)).collect() {
                out.push(c);
            }
        }
    }
    for (i, d) in instances.iter().enumerate() {
        for k in 1..=d.depth() {
            if let Some(smaller) = d.without_level(k) {
                let mut c = instances.to_vec();
                c[i] = smaller;
                out.push(c);
            }
        }
    }
    out
}
