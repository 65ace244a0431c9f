use crate::corpus::AlgebraBundle;
use crate::linalg::Matrix;

use super::GradedModule;

/// X_0 = K·x, X_1 = K with x·x^o = 1, x·y^o = 0, and X_3 = K where `path` acts by 1 from X_0.
pub(crate) fn two_loop_x(b: &AlgebraBundle, path: &str) -> GradedModule {
    let f = b.field();
    let u = &b.u;
    let idx = u.generator_index(path).unwrap();
    let mut actions = Vec::new();
    for (g, gen) in u.generators().iter().enumerate() {
        let mut acts = Vec::new();
        for d in 0..=3i64 {
            let dims = |k: i64| [1, 1, 0, 1].get(k as usize).copied().unwrap_or(0);
            let rows = if d + gen.degree as i64 <= 3 { dims(d + gen.degree as i64) } else { 0 };
            let mut m = Matrix::zeros(f, rows, dims(d));
            if d == 0 && gen.name == "x^o" || d == 0 && g == idx {
                m.set(0, 0, 1);
            }
            acts.push(m);
        }
        actions.push(acts);
    }
    GradedModule::new(u.clone(), 0, vec![vec![1], vec![1], vec![0], vec![1]], actions).unwrap()
}
