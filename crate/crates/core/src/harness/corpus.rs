//! Bundled benchmark problems.

use super::problem_file::parse_problem;
use crate::error::Result;
use crate::pipeline::Problem;

macro_rules! bundle {
    ($($id:literal),* $(,)?) => {
        &[$(($id, include_str!(concat!("../../../../corpus/", $id, ".prob")))),*]
    };
}

/// `(id, file text)` for every bundled problem.
pub const FILES: &[(&str, &str)] = bundle![
    "circle",
    "spheres-12-eq",
    "spheres-12-ne",
    "spheres-12-lt",
    "spheres-12-gt",
    "spheres-12-le",
    "spheres-12-ge",
    "spheres-23-eq",
    "spheres-23-ne",
    "spheres-23-lt",
    "spheres-23-gt",
    "spheres-23-le",
    "spheres-23-ge",
    "spheres-34-eq",
    "spheres-34-ne",
    "spheres-34-lt",
    "spheres-34-gt",
    "spheres-34-le",
    "spheres-34-ge",
    "solotareff-a",
    "solotareff-b",
    "solotareff-a-eqs",
    "solotareff-b-eqs",
];

pub fn ids() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(id, _)| *id)
}

pub fn text(id: &str) -> Option<&'static str> {
    FILES.iter().find(|(i, _)| *i == id).map(|(_, t)| *t)
}

pub fn load(id: &str) -> Option<Result<Problem>> {
    text(id).map(parse_problem)
}

pub fn load_all() -> Result<Vec<(&'static str, Problem)>> {
    FILES.iter().map(|(id, t)| Ok((*id, parse_problem(t)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ratio, Monomial, Polynomial, VarContext};

    #[test]
    fn every_file_parses() {
        let all = load_all().unwrap();
        assert_eq!(all.len(), 23);
        let solo = load("solotareff-a").unwrap().unwrap();
        assert_eq!(solo.equations().len(), 4);
        assert_eq!(solo.constraint().atoms().len(), 8);
        assert!(load("solotareff-b-eqs").unwrap().unwrap().constraint().atoms().is_empty());
    }

    #[test]
    fn sphere_polynomials_expand_exactly() {
        let ctx = VarContext::new(&["x", "y", "z"]).unwrap();
        let mono = |e: [u32; 3]| Monomial::from_exponents(e.to_vec());
        let canon = |terms: &[([u32; 3], i64, i64)]| {
            Polynomial::from_terms(&ctx, terms.iter().map(|(e, n, d)| (mono(*e), ratio(*n, *d))))
        };
        let s1 = canon(&[([2, 0, 0], 1, 1), ([1, 0, 0], -2, 1), ([0, 2, 0], 1, 1), ([0, 0, 2], 1, 1), ([0, 0, 0], -2, 1)]);
        let s2 = canon(&[([2, 0, 0], 1, 1), ([1, 0, 0], 2, 1), ([0, 2, 0], 1, 1), ([0, 0, 2], 1, 1), ([0, 0, 0], -2, 1)]);
        let s3 = canon(&[
            ([2, 0, 0], 1, 1),
            ([1, 0, 0], -2, 1),
            ([0, 2, 0], 1, 1),
            ([0, 1, 0], -1, 1),
            ([0, 0, 2], 1, 1),
            ([0, 0, 0], -7, 4),
        ]);
        let s4 = canon(&[
            ([2, 0, 0], 1, 1),
            ([1, 0, 0], 2, 1),
            ([0, 2, 0], 1, 1),
            ([0, 1, 0], 4, 3),
            ([0, 0, 2], 1, 1),
            ([0, 0, 1], 3, 2),
            ([0, 0, 0], -143, 144),
        ]);
        let c = canon(&[([2, 0, 0], 1, 1), ([0, 2, 0], 1, 1), ([0, 0, 0], -1, 1)]);
        let remap = |p: &Polynomial| Polynomial::parse(&ctx, &p.to_string()).unwrap();
        for (id, pair) in [("spheres-12-lt", [&s1, &s2]), ("spheres-23-lt", [&s2, &s3]), ("spheres-34-lt", [&s3, &s4])] {
            let prob = load(id).unwrap().unwrap();
            let eqs: Vec<Polynomial> = prob.equations().iter().map(remap).collect();
            assert_eq!(eqs, vec![pair[0].clone(), pair[1].clone()], "{id}");
            assert_eq!(remap(&prob.constraint().atoms()[0].poly), c);
        }
    }
}
