#![allow(dead_code)]

use entmin::young::Catalog;
use entmin::{EntropySpec, GroundSpace, MomentMap, MomentProblem, SolverOptions, TargetSet};

pub fn problem(name: &str, z: &[f64], r: &[f64], theta: Vec<Vec<f64>>, target: TargetSet, m: Option<&[f64]>) -> MomentProblem {
    let g = GroundSpace::from_coords(z, r).unwrap();
    let spec = EntropySpec::catalog(name, &g, m).unwrap();
    MomentProblem::new(spec, MomentMap::new(theta).unwrap(), target, g, SolverOptions::default()).unwrap()
}

pub struct Ground {
    pub z: Vec<f64>,
    pub r: Vec<f64>,
    pub theta: Vec<Vec<f64>>,
    pub m: Vec<f64>,
    pub singleton: Vec<f64>,
    pub box_center: Vec<f64>,
    pub box_radius: Vec<f64>,
}

/// Three small ground spaces with normalized and unnormalized moments.
pub fn grounds() -> Vec<Ground> {
    vec![
        Ground {
            z: vec![0.0, 1.0],
            r: vec![1.0, 1.0],
            theta: vec![vec![1.0, 1.0], vec![0.0, 1.0]],
            m: vec![0.5, 2.0],
            singleton: vec![1.0, 0.7],
            box_center: vec![1.0, 0.4],
            box_radius: vec![0.1, 0.05],
        },
        Ground {
            z: vec![-1.0, 0.0, 1.0],
            r: vec![0.5, 1.0, 0.5],
            theta: vec![vec![-1.0, 0.0, 1.0]],
            m: vec![0.5, 1.0, 2.0],
            singleton: vec![0.4],
            box_center: vec![0.5],
            box_radius: vec![0.2],
        },
        Ground {
            z: vec![0.0, 1.0, 2.0, 3.0],
            r: vec![0.5, 1.0, 1.0, 0.5],
            theta: vec![vec![1.0; 4], vec![0.0, 1.0, 2.0, 3.0]],
            m: vec![1.0, 0.5, 2.0, 1.0],
            singleton: vec![2.0, 3.0],
            box_center: vec![2.0, 3.0],
            box_radius: vec![0.2, 0.3],
        },
    ]
}

/// Every catalog entropy × {singleton, box} × [`grounds`].
pub fn catalog_suite() -> Vec<(String, MomentProblem)> {
    let mut out = Vec::new();
    for (gi, g) in grounds().iter().enumerate() {
        for kind in Catalog::ALL {
            let m = (kind == Catalog::BoltzmannVariant).then_some(g.m.as_slice());
            let targets = [
                ("singleton", TargetSet::singleton(g.singleton.clone())),
                ("box", TargetSet::boxed(g.box_center.clone(), g.box_radius.clone()).unwrap()),
            ];
            for (label, t) in targets {
                let p = problem(kind.as_str(), &g.z, &g.r, g.theta.clone(), t, m);
                out.push((format!("ground{gi}/{}/{label}", kind.as_str()), p));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Interior,
    Boundary,
    Infeasible,
}

/// Twelve problems with known position of the target relative to `T dom I`.
pub fn labeled_corpus() -> Vec<(String, MomentProblem, Label)> {
    let two = ([0.0, 1.0], [1.0, 1.0]);
    let nt2 = || vec![vec![1.0, 1.0], vec![0.0, 1.0]];
    let three = [0.0, 1.0, 2.0];
    let nt3 = || vec![vec![1.0; 3], vec![0.0, 1.0, 2.0]];
    let s = |x: &[f64]| TargetSet::singleton(x.to_vec());
    let b = |c: &[f64], r: &[f64]| TargetSet::boxed(c.to_vec(), r.to_vec()).unwrap();
    let m3 = [0.5, 1.0, 2.0];
    let cases: Vec<(&str, MomentProblem, Label)> = vec![
        ("boltzmann mean 0.7", problem("boltzmann_special", &two.0, &two.1, nt2(), s(&[1.0, 0.7]), None), Label::Interior),
        ("boltzmann mean 1", problem("boltzmann_special", &two.0, &two.1, nt2(), s(&[1.0, 1.0]), None), Label::Boundary),
        ("boltzmann mean 0", problem("boltzmann_special", &two.0, &two.1, nt2(), s(&[1.0, 0.0]), None), Label::Boundary),
        ("boltzmann mean 2", problem("boltzmann_special", &two.0, &two.1, nt2(), s(&[1.0, 2.0]), None), Label::Infeasible),
        ("reverse mean 0.7", problem("reverse_relative", &two.0, &two.1, nt2(), s(&[1.0, 0.7]), None), Label::Interior),
        ("reverse mean 1", problem("reverse_relative", &two.0, &two.1, nt2(), s(&[1.0, 1.0]), None), Label::Infeasible),
        ("reverse mean -0.5", problem("reverse_relative", &two.0, &two.1, nt2(), s(&[1.0, -0.5]), None), Label::Infeasible),
        ("variant mean 1.5", problem("boltzmann_variant", &three, &[1.0; 3], nt3(), s(&[1.0, 1.5]), Some(&m3)), Label::Interior),
        ("variant mean 2", problem("boltzmann_variant", &three, &[1.0; 3], nt3(), s(&[1.0, 2.0]), Some(&m3)), Label::Boundary),
        ("quadratic mean 5", problem("quadratic", &three, &[1.0; 3], nt3(), s(&[1.0, 5.0]), None), Label::Interior),
        ("boltzmann box mean [1.9,2.5]", problem("boltzmann_special", &three, &[1.0; 3], nt3(), b(&[1.0, 2.2], &[0.0, 0.3]), None), Label::Interior),
        ("boltzmann box mean [2,3]", problem("boltzmann_special", &three, &[1.0; 3], nt3(), b(&[1.0, 2.5], &[0.0, 0.5]), None), Label::Boundary),
    ];
    cases.into_iter().map(|(n, p, l)| (n.to_string(), p, l)).collect()
}
