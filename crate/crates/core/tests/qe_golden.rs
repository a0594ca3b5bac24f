use treeprob::automaton::Builtin;
use treeprob::exact::solve_exact;
use treeprob::pipeline::prepare_builtin;
use treeprob::qe::{export_stages, normalize_whitespace, PrimedOrder, QeOptions, StageFile};

fn stages(b: Builtin, options: QeOptions) -> Vec<StageFile> {
    let p = prepare_builtin(&b).unwrap();
    let exact = solve_exact(&p.system).unwrap();
    export_stages(&p.system, &b.slug(), Some(&exact), &options, None).unwrap()
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}.qe", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn assert_matches(file: &StageFile, name: &str) {
    assert_eq!(normalize_whitespace(&file.text), normalize_whitespace(&golden(name)), "{name}:\n{}", file.text);
}

#[test]
fn l2_stages() {
    let files = stages(Builtin::L(2), QeOptions::default());
    assert_eq!(files.len(), 2);
    assert_matches(&files[0], "L2_phi1");
    assert_matches(&files[1], "L2_phi2");
    assert_eq!(files[1].file_name, "L2_stage2.qe");
}

#[test]
fn l3_third_stage() {
    let options = QeOptions { primed_order: PrimedOrder::BoundFirst, ..QeOptions::default() };
    let files = stages(Builtin::L(3), options);
    assert_eq!(files.len(), 3);
    assert_matches(&files[2], "L3_phi3");
}

#[test]
fn linf_stages() {
    let files = stages(Builtin::Linf, QeOptions::default());
    assert_eq!(files.len(), 2);
    assert_matches(&files[0], "Linf_psi1");
    assert_matches(&files[1], "Linf_psi2");
}

#[test]
fn l1_single_stage() {
    let files = stages(Builtin::L(1), QeOptions::default());
    assert_eq!(files.len(), 1);
    assert!(files[0].input.ends_with("finish\n"));
}

#[test]
fn stage_inputs_declare_every_variable() {
    for f in stages(Builtin::L(3), QeOptions::default()) {
        let vars_line = f.input.lines().nth(1).unwrap();
        for (_, v) in &f.formula.prefix {
            assert!(vars_line.contains(&f.formula.name(*v)), "{}", f.file_name);
        }
    }
}
