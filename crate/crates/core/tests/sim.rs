use rand::Rng;

use minkest::expansion::{BallModel, RadiusLaw};
use minkest::geometry::VertexSet;
use minkest::lattice::{ClassTable, SymmetryGroup};
use minkest::rng::{stream, Domain};
use minkest::sim::{hit_miss_mc, mask_frequencies, miss_probability_oracle, sample_realization};

fn unit_model() -> BallModel<f64> {
    BallModel::new(0.1, RadiusLaw::Constant(1.0)).unwrap()
}

#[test]
fn ball_count_has_poisson_mean() {
    let model = unit_model();
    let n = 10_000;
    let counts: Vec<f64> = (0..n)
        .map(|s| sample_realization(&model, 10.0, s).unwrap().balls().len() as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / n as f64;
    let se = (172.8f64 / n as f64).sqrt();
    assert!((mean - 172.8).abs() <= 3.0 * se, "mean ball count {mean}");
}

#[test]
fn hashed_membership_matches_scan() {
    let model = BallModel::new(0.2, RadiusLaw::Uniform { min: 0.3, max: 1.2 }).unwrap();
    let real = sample_realization(&model, 10.0, 11).unwrap();
    let mut rng = stream(99, Domain::Experiment, 0);
    for _ in 0..100_000 {
        let x = [(); 3].map(|_| rng.random_range(0.0..=10.0));
        assert_eq!(real.contains(x), real.contains_naive(x), "at {x:?}");
    }
}

#[test]
fn void_probability_limit() {
    let model = unit_model();
    let e = hit_miss_mc(1, &model, 1e-6, 1_000_000, 1).unwrap();
    let exact = model.void_probability();
    assert!((exact - 0.657784).abs() < 5e-7);
    assert!((e.estimate - exact).abs() <= 3.0 * e.std_error, "{e:?}");
}

#[test]
fn hit_miss_is_deterministic() {
    let model = unit_model();
    assert_eq!(hit_miss_mc(9, &model, 0.2, 50_000, 4).unwrap(), hit_miss_mc(9, &model, 0.2, 50_000, 4).unwrap());
}

#[test]
fn configurations_of_a_class_are_equally_likely() {
    let model = unit_model();
    let f = mask_frequencies(&model, 0.2, 2_000_000, 21).unwrap();
    let group = SymmetryGroup::build();
    let table = ClassTable::shared();
    for j in [2, 3, 6, 9, 10, 17, 20, 21] {
        let rep = table.representative(j);
        let base = f.mask(rep);
        for g in group.elements().iter().step_by(5) {
            let other = f.mask(SymmetryGroup::apply(g, rep));
            let se = (base.std_error.powi(2) + other.std_error.powi(2)).sqrt();
            assert!((base.estimate - other.estimate).abs() <= 3.0 * se + 1e-12, "class {j}");
        }
    }
}

#[test]
fn miss_probability_is_monotone() {
    let f = mask_frequencies(&unit_model(), 0.3, 200_000, 8).unwrap();
    let chain = [0b0000_0001u8, 0b0000_0011, 0b0001_0011, 0b0111_0011, 0xff];
    for pair in chain.windows(2) {
        let small = f.miss(VertexSet::new(pair[0]).unwrap()).estimate;
        let large = f.miss(VertexSet::new(pair[1]).unwrap()).estimate;
        assert!(large <= small);
    }
}

#[test]
fn single_point_oracle() {
    let model = unit_model();
    let e = miss_probability_oracle(VertexSet::new(1).unwrap(), &model, 0.1, 1_000_000, 2).unwrap();
    let exact = model.void_probability();
    assert!((e.estimate - exact).abs() <= 3.0 * e.std_error + 1e-12, "{e:?}");
}

#[test]
fn full_cube_union_volume_obeys_steiner_bound() {
    let model = unit_model();
    let e = miss_probability_oracle(VertexSet::FULL, &model, 0.1, 1_000_000, 3).unwrap();
    let volume = -e.estimate.ln() / model.gamma;
    let slack = 3.0 * e.std_error / (e.estimate * model.gamma);
    let lower = 4.0 * std::f64::consts::PI / 3.0;
    let upper = lower + 3.0 * std::f64::consts::PI * 0.1 + 6.0 * 0.01 + 0.001;
    assert!(volume >= lower - slack && volume <= upper + slack, "volume {volume}");
}

#[test]
fn oracle_agrees_with_process_sampler() {
    let model = BallModel::new(0.1, RadiusLaw::Uniform { min: 0.5, max: 1.5 }).unwrap();
    let a = 0.3;
    let f = mask_frequencies(&model, a, 1_000_000, 5).unwrap();
    let mut rng = stream(5, Domain::Experiment, 1);
    for _ in 0..3 {
        let set = VertexSet::new(rng.random_range(1..=255u8)).unwrap();
        let direct = f.miss(set);
        let oracle = miss_probability_oracle(set, &model, a, 1_000_000, 6).unwrap();
        let se = (direct.std_error.powi(2) + oracle.std_error.powi(2)).sqrt();
        assert!((direct.estimate - oracle.estimate).abs() <= 3.0 * se, "{set:?}");
    }
}
