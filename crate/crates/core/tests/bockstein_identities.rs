//! Randomized checks of the Bockstein identities on the split model of
//! `H^k(Z/n)`, enumerating every element when the carrier is small.

use std::collections::HashSet;

use brauer_index::abelian::FgAbelianGroup;
use brauer_index::bockstein::{ModNElement, ModNModel};
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FACTORS: [i64; 5] = [2, 3, 4, 8, 16];
const MODULI: [i64; 5] = [2, 3, 4, 6, 8];

fn random_group(rng: &mut ChaCha8Rng) -> FgAbelianGroup {
    let k = rng.gen_range(0..=2);
    let mut orders: Vec<i64> = (0..k).map(|_| *FACTORS.choose(rng).unwrap()).collect();
    if rng.gen_range(0..=1) == 1 {
        orders.push(0);
    }
    FgAbelianGroup::from_cyclic_orders(&orders).unwrap()
}

/// Elements of `A` with free coordinates in `[0, box_size)`.
fn box_elements(a: &FgAbelianGroup, box_size: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for i in 0..a.ngens() {
        let range = a.generator_order(i).unwrap_or(box_size);
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..range).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// `a ∈ nA`, decided coordinatewise by searching for a preimage.
fn divisible_by(a: &FgAbelianGroup, x: &[i64], n: i64) -> bool {
    x.iter().enumerate().all(|(i, &c)| match a.generator_order(i) {
        Some(d) => (0..d).any(|k| (n * k - c).rem_euclid(d) == 0),
        None => c.rem_euclid(n) == 0,
    })
}

#[derive(Default)]
struct Tally {
    cases: usize,
    exhaustive: usize,
    elements: usize,
}

fn check_case(a: FgAbelianGroup, b: FgAbelianGroup, n: i64, tally: &mut Tally) {
    let model = ModNModel::new(a.clone(), b.clone(), n).unwrap();
    tally.cases += 1;
    let elements: Vec<ModNElement> = if model.carrier_order() <= 4096 {
        tally.exhaustive += 1;
        model.elements().collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(model.carrier_order());
        (0..512)
            .map(|_| {
                model.normalize(&ModNElement {
                    tensor: model.tensor_orders().iter().map(|&o| rng.gen_range(0..o)).collect(),
                    torsion: model.torsion_orders().iter().map(|&o| rng.gen_range(0..o)).collect(),
                })
            })
            .collect()
    };
    tally.elements += elements.len();

    // exactness at A: ker ρ_n = nA
    let box_a = box_elements(&a, 2 * n);
    for x in &box_a {
        let zero = model.rho(x) == model.zero();
        assert_eq!(zero, divisible_by(&a, x, n), "ker rho at {x:?}");
    }
    // exactness at C_n: ker β = im ρ_n
    let image_rho: HashSet<ModNElement> = box_a.iter().map(|x| model.rho(x)).collect();
    for x in &elements {
        assert_eq!(b.is_zero(&model.beta(x)), image_rho.contains(x), "exactness at {x:?}");
    }
    // exactness at B: im β = B[n]
    if model.carrier_order() <= 4096 {
        let image: HashSet<Vec<i64>> = elements.iter().map(|x| model.beta(x)).collect();
        let n_torsion: HashSet<Vec<i64>> = b.n_torsion_elements(n).collect();
        assert_eq!(image, n_torsion);
    }
    // β^{Q/Z} ∘ ι_n = β^{Z/n}
    for x in &elements {
        assert_eq!(model.beta_qz(&model.iota(x)), model.beta(x));
    }
    // β^{Z/2} ∘ ρ₂ = k·β^{Z/2k}, and ρ₂ commutes with reduction from A
    if n % 2 == 0 {
        let two = ModNModel::new(a.clone(), b.clone(), 2).unwrap();
        let reduce = model.coeff_reduce(&two).unwrap();
        let k = n / 2;
        for x in &elements {
            assert_eq!(two.beta(&reduce.apply(x)), b.scale(k, &model.beta(x)), "(2.1) at {x:?}");
        }
        for x in &box_a {
            assert_eq!(reduce.apply(&model.rho(x)), two.rho(x));
        }
    }
}

#[test]
fn randomized_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut tally = Tally::default();
    for _ in 0..240 {
        let a = random_group(&mut rng);
        let b = random_group(&mut rng);
        let n = *MODULI.choose(&mut rng).unwrap();
        check_case(a, b, n, &mut tally);
    }
    assert!(tally.cases >= 200);
    assert!(tally.exhaustive > tally.cases / 2, "most cases are exhaustive");
    assert!(tally.elements > 0);
}

#[test]
fn documented_splittings() {
    // A = Z/4, B = Z/2, n = 2: C_2 = Z/2 (+) Z/2
    let m = ModNModel::new(FgAbelianGroup::cyclic(4), FgAbelianGroup::cyclic(2), 2).unwrap();
    assert_eq!(m.carrier_order(), 4);
    // n = 3 on 2-groups: everything vanishes
    let m = ModNModel::new(FgAbelianGroup::cyclic(4), FgAbelianGroup::cyclic(8), 3).unwrap();
    assert_eq!(m.carrier_order(), 1);
    // free A contributes Z/n
    let m = ModNModel::new(FgAbelianGroup::free(1), FgAbelianGroup::trivial(), 6).unwrap();
    assert_eq!(m.carrier_order(), 6);
    assert_eq!(6i64.gcd(&4), 2);
}
