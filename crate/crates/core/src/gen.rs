//! Seeded random presentations for property tests and sampling.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::field::Field;
use crate::quiver::{enumerate_paths, Path, Presentation, Quiver, Relation};

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_vertices: usize,
    pub max_arrows: usize,
    pub max_relations: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_vertices: 5, max_arrows: 6, max_relations: 2 }
    }
}

/// An acyclic quiver on vertices `1..=n` whose arrows run from lower to
/// higher index, with up to `max_relations` admissible relations: monomials
/// or two-term combinations of parallel paths of length at least 2.
pub fn random_acyclic<F: Field, R: Rng>(shape: Shape, rng: &mut R) -> Presentation<F> {
    let n = rng.gen_range(1..=shape.max_vertices.max(1));
    let mut q = Quiver::new(format!("rand{n}"));
    for v in 1..=n {
        q.add_vertex(v.to_string()).expect("fresh vertex");
    }
    if n > 1 {
        for k in 0..rng.gen_range(0..=shape.max_arrows) {
            let s = rng.gen_range(0..n - 1);
            let t = rng.gen_range(s + 1..n);
            q.add_arrow(format!("x{}", k + 1), s, t).expect("fresh arrow");
        }
    }
    let mut pres = Presentation::new(q);
    let long_paths: Vec<Vec<Path>> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| enumerate_paths(&pres.quiver, a, b, n).into_iter().filter(|p| p.len() >= 2).collect::<Vec<_>>())
        .filter(|ps| !ps.is_empty())
        .collect();
    for _ in 0..rng.gen_range(0..=shape.max_relations) {
        let Some(parallel) = long_paths.choose(rng) else { break };
        let p = parallel.choose(rng).expect("nonempty").clone();
        let mut terms = vec![(F::one(), p.clone())];
        if parallel.len() > 1 && rng.gen_bool(0.5) {
            let other = parallel.iter().filter(|x| **x != p).collect::<Vec<_>>();
            let c = *[-1i64, 1, 2].choose(rng).expect("nonempty");
            terms.push((F::from_i64(c), (*other.choose(rng).expect("nonempty")).clone()));
        }
        if let Ok(r) = Relation::new(terms) {
            pres.add_relation(r);
        }
    }
    pres
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes_respect_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p: Presentation<Rational> = random_acyclic(Shape::default(), &mut rng);
            assert!(p.quiver.num_vertices() <= 5 && p.quiver.num_arrows() <= 6 && p.relations.len() <= 2);
            assert!(p.quiver.is_acyclic());
            for r in &p.relations {
                assert!(r.check_admissible(&p.quiver).is_ok());
            }
        }
    }
}
