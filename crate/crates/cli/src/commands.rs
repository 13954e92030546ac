use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use sha2::{Digest, Sha256};

use recoupling::exact::Rational;
use recoupling::graphs::{enumerate_colorings, nontrivial, AdmissibleGraph};
use recoupling::polyspace::{bend as bend_flow, lambda_map, moduli_equal, theta_angle, torus_point, Configuration, Membership, Polytope};
use recoupling::sixj::{self, overlap_from_labels, racah_6j, SixJLabels, SWEEP_HEADER};
use recoupling::su2::{dim_invariant, joint_eigenbasis, InvariantSpace, OverlapMatrix};
use recoupling::tetra::TetraEdges;

use crate::io::{csv_text, emit, json_text, load_graph, precondition, verdict, Failure};
use crate::{BendArgs, Format, OverlapArgs, SixjArgs, SpectrumArgs, SweepArgs, TetraArgs};

type Outcome = Result<bool, Failure>;

fn check_labels(ell: &[u32]) -> Result<(), Failure> {
    if ell.len() < 3 {
        return Err(precondition("need at least three boundary labels"));
    }
    if ell.iter().sum::<u32>() % 2 == 1 {
        return Err(precondition("ℓ is trivial: label sum odd, so the invariant subspace is zero"));
    }
    if !nontrivial(ell) {
        return Err(precondition(
            "ℓ is trivial: a label exceeds the sum of the others, so the invariant subspace is zero",
        ));
    }
    Ok(())
}

fn graph_for(src: &Option<String>, n: usize) -> Result<AdmissibleGraph, Failure> {
    let g = match src {
        Some(s) => load_graph(s)?,
        None => AdmissibleGraph::caterpillar(n)?,
    };
    if g.n_half() != n {
        return Err(precondition(format!("graph has {} half-edges but {n} lengths were given", g.n_half())));
    }
    Ok(g)
}

fn edge_ids(g: &AdmissibleGraph) -> Vec<String> {
    g.internal_edges().iter().map(|e| e.id.clone()).collect()
}

pub fn spectrum(a: SpectrumArgs) -> Outcome {
    check_labels(&a.ell)?;
    let g = graph_for(&a.graph, a.ell.len())?;
    let space = InvariantSpace::new(&a.ell)?;
    let colorings = enumerate_colorings(&g, &a.ell);
    let basis = joint_eigenbasis(&g, &space)?;
    let dims_agree = space.dim() as u64 == dim_invariant(&a.ell) && space.dim() == colorings.len();
    let spectra_agree = basis.len() == colorings.len()
        && basis.iter().zip(&colorings).all(|(v, phi)| {
            v.coloring == *phi
                && v.eigenvalues() == phi.internal.iter().map(|&c| c as u64 * (c as u64 + 2)).collect::<Vec<_>>()
        });
    let pass = dims_agree && spectra_agree;
    let ids = edge_ids(&g);
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let entries: Vec<_> = basis
                .iter()
                .map(|v| {
                    let ev: serde_json::Map<_, _> =
                        ids.iter().cloned().zip(v.eigenvalues().into_iter().map(|x| json!(x))).collect();
                    json!({"coloring": v.coloring.key(&g), "eigenvalues": ev})
                })
                .collect();
            json_text(&json!({
                "graph": g.to_text(),
                "ell": a.ell,
                "dim_invariant": space.dim(),
                "colorings": colorings.len(),
                "spectrum": entries,
                "verdict": verdict(pass),
            }))
        }
        Format::Csv => {
            let mut header = vec!["coloring".to_string()];
            header.extend(ids.iter().cloned());
            let rows: Vec<Vec<String>> = basis
                .iter()
                .map(|v| {
                    let mut r = vec![v.coloring.key(&g)];
                    r.extend(v.eigenvalues().iter().map(|x| x.to_string()));
                    r
                })
                .collect();
            csv_text(&header, &rows)
        }
    };
    emit(&a.output.out, &text)?;
    eprintln!("spectrum: {} joint eigenvalues, verdict {}", basis.len(), verdict(pass));
    Ok(pass)
}

pub fn colorings(a: SpectrumArgs) -> Outcome {
    let g = graph_for(&a.graph, a.ell.len())?;
    let list = enumerate_colorings(&g, &a.ell);
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({
            "graph": g.to_text(),
            "ell": a.ell,
            "count": list.len(),
            "colorings": list.iter().map(|c| c.to_json(&g)).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let ids = edge_ids(&g);
            let rows: Vec<Vec<String>> =
                list.iter().map(|c| c.internal.iter().map(|x| x.to_string()).collect()).collect();
            csv_text(&ids, &rows)
        }
    };
    emit(&a.output.out, &text)?;
    Ok(true)
}

/// Whether the single internal edge of a four-leaf graph pairs `{1,2}|{3,4}`
/// or `{2,3}|{1,4}`.
fn pairing(g: &AdmissibleGraph, first: [usize; 2], second: [usize; 2]) -> bool {
    if g.n_half() != 4 || g.internal_edges().len() != 1 {
        return false;
    }
    let mut s = g.i_set(0);
    s.sort_unstable();
    s == first || s == second
}

fn unit_sums(rows: &[Vec<Rational>]) -> bool {
    let one = Rational::from_integer(1.into());
    let n = rows.first().map_or(0, |r| r.len());
    rows.iter().all(|r| r.iter().sum::<Rational>() == one)
        && (0..n).all(|j| rows.iter().map(|r| r[j].clone()).sum::<Rational>() == one)
}

pub fn overlap(a: OverlapArgs) -> Outcome {
    check_labels(&a.ell)?;
    let g1 = load_graph(&a.graph)?;
    let g2 = load_graph(&a.graph2)?;
    if g1.n_half() != a.ell.len() || g2.n_half() != a.ell.len() {
        return Err(precondition("graphs and labels disagree on the number of half-edges"));
    }
    let space = InvariantSpace::new(&a.ell)?;
    let b1 = joint_eigenbasis(&g1, &space)?;
    let b2 = joint_eigenbasis(&g2, &space)?;
    let om = OverlapMatrix::between(&space, &b1, &b2);
    let squares = om.squares();
    let unitary = unit_sums(&squares);
    let racah = (pairing(&g1, [1, 2], [3, 4]) && pairing(&g2, [2, 3], [1, 4])).then(|| {
        let ell = [a.ell[0], a.ell[1], a.ell[2], a.ell[3]];
        om.rows.iter().zip(&squares).all(|(r, row)| {
            om.cols.iter().zip(row).all(|(c, sq)| {
                overlap_from_labels(ell, r.internal[0], c.internal[0]).is_ok_and(|p| p.square == *sq)
            })
        })
    });
    let pass = unitary && racah.unwrap_or(true);
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({
            "graph": g1.to_text(),
            "graph2": g2.to_text(),
            "ell": a.ell,
            "overlaps": om.to_json(&g1, &g2),
            "unitary": unitary,
            "racah_check": racah.map_or("n/a", verdict),
            "verdict": verdict(pass),
        })),
        Format::Csv => {
            let header: Vec<String> = ["row", "col", "exact_sq", "float", "sign"].map(String::from).to_vec();
            let mut rows = Vec::new();
            for (r, es) in om.rows.iter().zip(&om.entries) {
                for (c, e) in om.cols.iter().zip(es) {
                    rows.push(vec![
                        r.key(&g1),
                        c.key(&g2),
                        e.exact_sq.to_string(),
                        e.value().to_string(),
                        e.sign.to_string(),
                    ]);
                }
            }
            csv_text(&header, &rows)
        }
    };
    emit(&a.output.out, &text)?;
    eprintln!("overlap: {}x{} matrix, verdict {}", om.rows.len(), om.cols.len(), verdict(pass));
    Ok(pass)
}

pub fn sixj(a: SixjArgs) -> Outcome {
    let l: [u32; 6] = a.labels.as_slice().try_into().map_err(|_| precondition("--labels needs six values"))?;
    let lbl = SixJLabels(l);
    let v = racah_6j(lbl);
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({
            "labels": l,
            "admissible": lbl.is_admissible(),
            "exact": v.to_string(),
            "square": v.square().to_string(),
            "float": v.to_f64(),
        })),
        Format::Csv => csv_text(
            &["labels", "exact", "square", "float"].map(String::from),
            &[vec![lbl.to_string(), v.to_string(), v.square().to_string(), v.to_f64().to_string()]],
        ),
    };
    emit(&a.output.out, &text)?;
    Ok(true)
}

fn parse_range(s: &str) -> Result<Vec<u32>, Failure> {
    let bad = || precondition(format!("bad --k-range '{s}', expected a:b"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (u32, u32) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

pub fn sweep(a: SweepArgs) -> Outcome {
    let ell: [u32; 4] = a.ell.as_slice().try_into().map_err(|_| precondition("--ell needs four values"))?;
    if !(a.target_e > 0.0 && a.target_ep > 0.0) {
        return Err(precondition("targets must be positive"));
    }
    let ks = match a.k {
        Some(k) if k > 0 => vec![k],
        Some(_) => return Err(precondition("k must be positive")),
        None => parse_range(&a.k_range)?,
    };
    let rows = sixj::sweep(&ks, ell, a.target_e.sqrt(), a.target_ep.sqrt())?;
    let summary = sixj::summarize(&rows);
    let slope_ok = summary.slope.is_none_or(|s| s <= a.tol_slope);
    let uniform_ok = summary.uniformity.is_none_or(|u| u <= a.tol_uniformity) || rows.len() < 3;
    let pass = slope_ok && uniform_ok;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(SWEEP_HEADER.split(',')).expect("in-memory write");
            for r in &rows {
                w.serialize(r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Json => json_text(&json!({"rows": rows, "summary": summary, "verdict": verdict(pass)})),
    };
    emit(&a.output.out, &text)?;
    let fmt = |x: Option<f64>| x.map_or("none".to_string(), |v| format!("{v:.4}"));
    eprintln!(
        "summary: rows={} fitted={} slope={} uniformity={} verdict={}",
        summary.rows,
        summary.fitted,
        fmt(summary.slope),
        fmt(summary.uniformity),
        verdict(pass)
    );
    Ok(pass)
}

fn gram_hash(c: &Configuration) -> String {
    let mut h = Sha256::new();
    for row in c.gram() {
        for x in row {
            let q = (x * 1e8).round() as i64;
            h.update(q.to_le_bytes());
        }
    }
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn parse_schedule(g: &AdmissibleGraph, spec: &Option<Vec<String>>) -> Result<Vec<(usize, f64)>, Failure> {
    let Some(items) = spec else {
        return Ok(if g.internal_edges().is_empty() { vec![] } else { vec![(0, 1.0)] });
    };
    items
        .iter()
        .map(|s| {
            let (edge, periods) = s.split_once(':').unwrap_or((s.as_str(), "1"));
            let e = g.edge_index(edge.trim())?;
            let p: f64 = periods.trim().parse().map_err(|_| precondition(format!("bad schedule entry '{s}'")))?;
            Ok((e, p))
        })
        .collect()
}

pub fn bend(a: BendArgs) -> Outcome {
    let g = graph_for(&a.graph, a.ell.len())?;
    let poly = Polytope::new(g.clone(), a.ell.clone())?;
    let ne = g.internal_edges().len();
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let d = match &a.point {
        Some(d) => {
            if d.len() != ne {
                return Err(precondition(format!("--point needs {ne} values")));
            }
            match poly.membership(d) {
                Membership::Interior => d.clone(),
                m => return Err(precondition(format!("start point is not interior ({m:?})"))),
            }
        }
        None => poly
            .sample_interior(&mut rng, 100_000)
            .ok_or_else(|| precondition("no interior point found; is the polytope empty?"))?,
    };
    let angles = match &a.angles {
        Some(t) if t.len() == ne => t.clone(),
        Some(_) => return Err(precondition(format!("--angles needs {ne} values"))),
        None => (0..ne).map(|_| rng.gen_range(0.0..2.0 * PI)).collect(),
    };
    let schedule = parse_schedule(&g, &a.schedule)?;
    let start = torus_point(&g, &a.ell, &d, &angles)?;
    let lambda0 = lambda_map(&g, &start);
    let steps = a.steps.max(1);

    let ids = edge_ids(&g);
    let mut header = vec!["step".to_string(), "edge".to_string(), "t".to_string()];
    header.extend(ids.iter().map(|id| format!("lambda_{id}")));
    header.extend(ids.iter().map(|id| format!("theta_{id}")));
    header.push("gram_hash".into());
    let mut rows = Vec::new();
    let mut record = |step: usize, edge: &str, t: f64, c: &Configuration| {
        let mut r = vec![step.to_string(), edge.to_string(), format!("{t:.12}")];
        r.extend(lambda_map(&g, c).iter().map(|x| format!("{x:.12}")));
        r.extend((0..ne).map(|e| theta_angle(&g, c, e).map_or(String::new(), |x| format!("{x:.12}"))));
        r.push(gram_hash(c));
        rows.push(r);
    };

    let mut c = start.clone();
    let mut drift = 0.0f64;
    let mut totals = vec![0.0; ne];
    record(0, "", 0.0, &c);
    let mut step = 0;
    for &(e, periods) in &schedule {
        let members = g.i_set(e);
        let seg_start = c.clone();
        totals[e] += periods;
        for s in 1..=steps {
            let t = PI * periods * s as f64 / steps as f64;
            c = bend_flow(&seg_start, &members, t)?;
            step += 1;
            for (x, x0) in lambda_map(&g, &c).iter().zip(&lambda0) {
                drift = drift.max((x - x0).abs());
            }
            record(step, &ids[e], t, &c);
        }
    }
    let periodic = moduli_equal(&start, &c);
    let expect_periodic = totals.iter().all(|p| (p - p.round()).abs() < 1e-12);
    let conserved = drift <= a.tol_conservation;
    let pass = conserved && periodic == expect_periodic;
    let label = |p: bool| if p { "PERIODIC" } else { "MOVED" };
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_text(&header, &rows),
        Format::Json => {
            let trace: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| serde_json::Value::Object(header.iter().cloned().zip(r.iter().map(|x| json!(x))).collect()))
                .collect();
            json_text(&json!({
                "start": start.to_json(),
                "trace": trace,
                "max_lambda_drift": drift,
                "result": label(periodic),
                "expected": label(expect_periodic),
                "verdict": verdict(pass),
            }))
        }
    };
    emit(&a.output.out, &text)?;
    eprintln!(
        "bend: {} (expected {}), max lambda drift {drift:.3e}, verdict {}",
        label(periodic),
        label(expect_periodic),
        verdict(pass)
    );
    Ok(pass)
}

pub fn tetra(a: TetraArgs) -> Outcome {
    let t = match (&a.lengths, a.target_e, a.target_ep, &a.ell) {
        (Some(l), None, None, None) if l.len() == 6 => TetraEdges::new(l[0], l[1], [l[2], l[3], l[4], l[5]])?,
        (None, Some(e), Some(ep), Some(ell)) if ell.len() == 4 && e > 0.0 && ep > 0.0 => {
            TetraEdges::new(e.sqrt(), ep.sqrt(), [ell[0], ell[1], ell[2], ell[3]])?
        }
        _ => {
            return Err(precondition(
                "give either --lengths sqrtE,sqrtEp,l1,l2,l3,l4 or --target-E, --target-Ep and four --ell values",
            ))
        }
    };
    let report = t.report()?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&serde_json::to_value(&report).expect("report serializes")),
        Format::Csv => {
            let header = ["V", "alpha_h", "alpha_hp", "alpha_l1", "alpha_l2", "alpha_l3", "alpha_l4", "theta", "area", "omega"]
                .map(String::from);
            let mut row = vec![report.volume.to_string()];
            row.extend(report.alpha.all().iter().map(|x| x.to_string()));
            row.extend([report.theta, report.area, report.omega].iter().map(|x| x.to_string()));
            csv_text(&header, &[row])
        }
    };
    emit(&a.output.out, &text)?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_ranges() {
        assert_eq!(parse_range("3:5").unwrap(), vec![3, 4, 5]);
        assert!(parse_range("0:5").is_err());
        assert!(parse_range("5:3").is_err());
        assert!(parse_range("5").is_err());
    }

    #[test]
    fn schedules() {
        let g = AdmissibleGraph::builtin("cat5").unwrap();
        assert_eq!(parse_schedule(&g, &None).unwrap(), vec![(0, 1.0)]);
        let items = Some(vec!["e2:0.5".to_string(), "e1".to_string()]);
        assert_eq!(parse_schedule(&g, &items).unwrap(), vec![(1, 0.5), (0, 1.0)]);
        assert!(parse_schedule(&g, &Some(vec!["e9:1".to_string()])).is_err());
    }

    #[test]
    fn gram_hash_tracks_bending() {
        let g = AdmissibleGraph::builtin("g4").unwrap();
        let c = torus_point(&g, &[1.0; 4], &[1.2], &[0.7]).unwrap();
        let i = g.i_set(0);
        assert_eq!(gram_hash(&c), gram_hash(&bend_flow(&c, &i, PI).unwrap()));
        assert_ne!(gram_hash(&c), gram_hash(&bend_flow(&c, &i, 0.4).unwrap()));
        assert_eq!(gram_hash(&c).len(), 16);
    }
}
