//! Export of the generic matrices, and verification from exported files alone.

use crate::report::{Check, StageReport};
use anyhow::{bail, Context, Result};
use qpres::braiding::{drinfeld_contraction, CONVENTION};
use qpres::intertwiners::{morphism_residual, FormPack};
use qpres::linalg::Mat;
use qpres::presentation::{coproduct_check, PresentationInput, Selector};
use qpres::tensor::{flip, TensorPower};
use qpres::uqmod::RepModule;
use qpres::Scalar;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::Path;

pub const MATRICES: [&str; 6] = ["R", "L", "A", "B_dual", "L_dual", "u"];

#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(rename = "type")]
    pub cartan: String,
    pub convention: String,
    pub code_version: String,
    /// `(name, rows, cols)` per matrix file.
    pub matrices: Vec<(String, usize, usize)>,
}

fn write_json<T: Serialize>(dir: &Path, name: &str, x: &T) -> Result<()> {
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_vec_pretty(x)?).with_context(|| format!("writing {}", path.display()))
}

fn read_json<T: for<'de> Deserialize<'de>>(dir: &Path, name: &str) -> Result<T> {
    let path = dir.join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn export(dir: &Path, v: &RepModule<Scalar>, r: &Mat<Scalar>, u: &Mat<Scalar>, pack: &FormPack<Scalar>) -> Result<Manifest> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mats = [r, &pack.l, &pack.a, &pack.b_dual, &pack.l_dual, u];
    for (name, m) in MATRICES.iter().zip(mats) {
        write_json(dir, name, m)?;
    }
    write_json(dir, "module", v)?;
    let manifest = Manifest {
        cartan: v.datum.cartan_type.to_string(),
        convention: CONVENTION.into(),
        code_version: env!("CARGO_PKG_VERSION").into(),
        matrices: MATRICES.iter().zip(mats).map(|(n, m)| (n.to_string(), m.nrows(), m.ncols())).collect(),
    };
    write_json(dir, "manifest", &manifest)?;
    Ok(manifest)
}

fn residual(name: &str, nonzero: usize) -> Check {
    Check::bool(name, nonzero == 0, if nonzero == 0 { String::new() } else { format!("{nonzero} nonzero entries") })
}

/// Every residual check that needs only the exported files.
pub fn verify_dir(dir: &Path) -> Result<StageReport> {
    let manifest: Manifest = read_json(dir, "manifest")?;
    if manifest.convention != CONVENTION {
        bail!("artifacts use convention `{}`", manifest.convention);
    }
    let v: RepModule<Scalar> = read_json(dir, "module")?;
    let [r, l, a, b_dual, l_dual, u]: [Mat<Scalar>; 6] = MATRICES
        .iter()
        .map(|n| read_json(dir, n))
        .collect::<Result<Vec<_>>>()?
        .try_into()
        .map_err(|_| anyhow::anyhow!("matrix count"))?;
    for ((name, rows, cols), m) in manifest.matrices.iter().zip([&r, &l, &a, &b_dual, &l_dual, &u]) {
        if m.shape() != (*rows, *cols) {
            bail!("{name}: shape {:?} does not match the manifest", m.shape());
        }
    }
    let n = v.dim();
    let mut checks = vec![Check::bool("module relations", v.relations_hold(), "")];
    for g in v.gamma_residuals() {
        checks.push(residual(&g.name, g.nonzero));
    }
    let rhat = flip::<Scalar>(n).mul(&r);
    let id = Mat::<Scalar>::identity(n);
    let (x, y) = (rhat.kron(&id), id.kron(&rhat));
    checks.push(Check::bool("Yang-Baxter", x.mul(&y).mul(&x) == y.mul(&x).mul(&y), ""));
    let t2 = TensorPower::new(&v, 2);
    checks.push(residual("sigma R is a module map", t2.generators().iter().map(|g| rhat.mul(g).sub(&g.mul(&rhat)).nnz()).sum()));
    let b = qpres::intertwiners::form_row(&a);
    for (name, m, k, x) in [("L", 2, 1, &l), ("B", 2, 0, &b), ("B'", 0, 2, &b_dual), ("L'", 1, 2, &l_dual)] {
        checks.push(residual(&format!("{name} is a module map"), morphism_residual(&v, m, k, x)));
    }
    let zig = b.kron(&id).mul(&id.kron(&b_dual));
    checks.push(Check::bool("(B ⊗ 1)(1 ⊗ B') = 1", zig == id, ""));
    checks.push(Check::bool("u is the contraction of R", drinfeld_contraction(&r, n)? == u, ""));
    let cop = PresentationInput::new(v.weights.clone(), r, Some(l), Some(a), Selector::R1R3Inv).and_then(|i| coproduct_check(&i));
    checks.push(match cop {
        Ok(c) => Check::bool("coproduct preserves the relations", c.failures.is_empty(), c.failures.join(", ")),
        Err(e) => Check::bool("coproduct preserves the relations", false, e.to_string()),
    });
    Ok(StageReport::new("verify-artifacts", checks, json!({ "dir": dir.display().to_string(), "type": manifest.cartan })))
}
