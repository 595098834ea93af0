use nalgebra::DMatrix;

use super::{max_diff, norm, FiberError, C};

fn act(m: &DMatrix<f64>, x: &[C]) -> Vec<C> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| x[j] * m[(i, j)]).sum())
        .collect()
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Groups solutions into orbits of the linear action given by `group`
/// (identity included or not). Two solutions share a class iff some element
/// maps one within `cluster_radius` of the other; the union-find classes are
/// then checked pairwise.
pub fn orbit_partition(solutions: &[Vec<C>], group: &[DMatrix<f64>], cluster_radius: f64) -> Result<Vec<Vec<usize>>, FiberError> {
    let n = solutions.len();
    let images: Vec<Vec<Vec<C>>> = solutions
        .iter()
        .map(|x| {
            let mut imgs: Vec<Vec<C>> = group.iter().map(|g| act(g, x)).collect();
            imgs.push(x.clone());
            imgs
        })
        .collect();
    let related = |i: usize, j: usize| {
        let radius = cluster_radius * norm(&solutions[j]).max(1.0);
        images[i].iter().any(|y| max_diff(y, &solutions[j]) <= radius)
    };
    let mut parent: Vec<usize> = (0..n).collect();
    let mut adjacency = vec![vec![false; n]; n];
    for i in 0..n {
        adjacency[i][i] = true;
        for j in i + 1..n {
            if related(i, j) || related(j, i) {
                adjacency[i][j] = true;
                adjacency[j][i] = true;
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[root]].push(i);
    }
    for class in &classes {
        for (k, &a) in class.iter().enumerate() {
            for &b in &class[k + 1..] {
                if !adjacency[a][b] {
                    return Err(FiberError::InconsistentOrbits { first: a, second: b });
                }
            }
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sign() -> Vec<DMatrix<f64>> {
        vec![DMatrix::from_element(1, 1, -1.0)]
    }

    fn pts(v: &[C]) -> Vec<Vec<C>> {
        v.iter().map(|z| vec![*z]).collect()
    }

    #[test]
    fn sign_orbits() {
        let two = pts(&[C::new(2.0, 0.0), C::new(-2.0, 0.0)]);
        assert_eq!(orbit_partition(&two, &sign(), 1e-6).unwrap(), vec![vec![0, 1]]);
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        let four = pts(&[C::new(s2, 0.0), C::new(-s2, 0.0), C::new(0.0, s3), C::new(0.0, -s3)]);
        assert_eq!(orbit_partition(&four, &sign(), 1e-6).unwrap(), vec![vec![0, 1], vec![2, 3]]);
        let zero = pts(&[C::new(0.0, 0.0)]);
        assert_eq!(orbit_partition(&zero, &sign(), 1e-6).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn inconsistent_radius_detected() {
        // a ~ b and b ~ c within the radius, but a and c are too far apart
        let chain = pts(&[C::new(0.0, 0.0), C::new(0.6, 0.0), C::new(1.2, 0.0)]);
        let e = orbit_partition(&chain, &[], 0.7).unwrap_err();
        assert!(matches!(e, FiberError::InconsistentOrbits { first: 0, second: 2 }));
    }
}
