mod common;

use possmc::algebra::{iterate, least_fixed_point, phi};
use possmc::{FuzzyMatrix, FuzzyVector, Possibility};
use proptest::prelude::*;

const GRID: [f64; 6] = [0.0, 0.2, 0.5, 0.7, 0.9, 1.0];

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn grid_values(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop::sample::select(GRID.to_vec()), len)
}

fn matrix_of(n: usize) -> impl Strategy<Value = FuzzyMatrix> {
    grid_values(n * n).prop_map(move |v| {
        let rows: Vec<&[f64]> = v.chunks(n).collect();
        FuzzyMatrix::from_rows(labels(n), &rows).unwrap()
    })
}

fn vector_of(n: usize) -> impl Strategy<Value = FuzzyVector> {
    grid_values(n).prop_map(move |v| FuzzyVector::from_values(labels(n), &v).unwrap())
}

fn three_matrices() -> impl Strategy<Value = (FuzzyMatrix, FuzzyMatrix, FuzzyMatrix)> {
    (1usize..=5).prop_flat_map(|n| (matrix_of(n), matrix_of(n), matrix_of(n)))
}

fn system() -> impl Strategy<Value = (FuzzyMatrix, FuzzyVector)> {
    (1usize..=6).prop_flat_map(|n| (matrix_of(n), vector_of(n)))
}

fn grid_only(entries: &[Possibility]) -> bool {
    entries.iter().all(|p| GRID.contains(&p.value()))
}

proptest! {
    #[test]
    fn composition_is_associative((a, b, c) in three_matrices()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_is_a_unit((a, _, _) in three_matrices()) {
        let id = FuzzyMatrix::identity(a.labels().to_vec()).unwrap();
        prop_assert_eq!(&a.compose(&id).unwrap(), &a);
        prop_assert_eq!(&id.compose(&a).unwrap(), &a);
    }

    #[test]
    fn composition_is_monotone((a, b, c) in three_matrices()) {
        let bigger = a.join(&b).unwrap();
        prop_assert!(a.compose(&c).unwrap().le(&bigger.compose(&c).unwrap()));
        prop_assert!(c.compose(&a).unwrap().le(&c.compose(&bigger).unwrap()));
    }

    #[test]
    fn results_stay_on_the_grid((a, b, _) in three_matrices()) {
        prop_assert!(grid_only(a.compose(&b).unwrap().entries()));
        prop_assert!(grid_only(a.transitive_closure().entries()));
    }

    #[test]
    fn closure_is_transitive_and_stable((a, _, _) in three_matrices()) {
        let plus = a.transitive_closure();
        prop_assert!(a.le(&plus));
        prop_assert!(plus.compose(&plus).unwrap().le(&plus));
        prop_assert_eq!(&plus.join(&plus.compose(&a).unwrap()).unwrap(), &plus);
        prop_assert_eq!(&plus, &a.closure_by_powers());
    }

    #[test]
    fn fixed_point_is_least((a, b) in system()) {
        let fp = least_fixed_point(&a, &b).unwrap();
        prop_assert!(fp.iterations <= a.dim());
        prop_assert_eq!(&phi(&a, &b, &fp.solution).unwrap(), &fp.solution);
        prop_assert_eq!(&iterate(&a, &b, fp.iterations).unwrap(), &fp.solution);

        // Iterating downward from the top element reaches the greatest fixed point.
        let mut top = FuzzyVector::constant(a.labels().to_vec(), Possibility::ONE).unwrap();
        loop {
            let next = phi(&a, &b, &top).unwrap();
            if next == top {
                break;
            }
            top = next;
        }
        prop_assert!(fp.solution.le(&top));
    }

    #[test]
    fn iterates_form_a_chain((a, b) in system()) {
        let fp = least_fixed_point(&a, &b).unwrap();
        let mut prev = iterate(&a, &b, 0).unwrap();
        for n in 1..=a.dim() + 1 {
            let next = iterate(&a, &b, n).unwrap();
            prop_assert!(prev.le(&next));
            prop_assert!(next.le(&fp.solution));
            prev = next;
        }
        prop_assert!(grid_only(fp.solution.entries()));
    }
}
