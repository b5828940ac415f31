use ordfill_core::bundle::{verify, verify_bundle, CertificateBundle, Int};
use ordfill_core::order::OutcomeWire;

const GOLDEN: &str = include_str!("golden/v2503.bundle.json");

fn golden() -> CertificateBundle {
    CertificateBundle::from_json(GOLDEN).unwrap()
}

fn rejected(b: &CertificateBundle, section: &str) {
    let e = verify(b).unwrap_err();
    assert!(e.starts_with(section), "{e}");
}

#[test]
fn golden_bundle_verifies_and_round_trips() {
    let s = verify_bundle(GOLDEN).unwrap();
    assert_eq!((s.certificates, s.tree_branches, s.cosets, s.verdicts), (11, 4, 10, 8));
    assert_eq!(golden().to_json(), GOLDEN);
}

#[test]
fn unknown_fields_are_rejected() {
    let text = GOLDEN.replacen("\"schema\"", "\"extra\": 1,\n  \"schema\"", 1);
    assert!(verify_bundle(&text).unwrap_err().starts_with("malformed bundle"));
}

#[test]
fn edited_manifold_text_is_rejected() {
    let mut b = golden();
    b.manifold.text = b.manifold.text.replace("expect-quotient: 10", "expect-quotient: 11");
    assert!(verify(&b).is_err());
}

#[test]
fn wrong_smith_transform_is_rejected() {
    let mut b = golden();
    b.homology.smith.v[0][1] = Int::Small(1);
    rejected(&b, "homology");
}

#[test]
fn wrong_class_is_rejected() {
    let mut b = golden();
    b.homology.classes[0].order = Some(Int::Small(5));
    rejected(&b, "homology");
}

#[test]
fn non_canonical_big_integer_is_rejected() {
    let mut b = golden();
    b.homology.torsion[0] = Int::Big("10".into());
    rejected(&b, "homology");
}

#[test]
fn swapped_certificates_are_rejected() {
    let mut b = golden();
    let first = b.identities.claims[0].certificate.clone();
    b.identities.claims[0].certificate = b.identities.claims[1].certificate.clone();
    b.identities.claims[1].certificate = first;
    rejected(&b, "identities");
}

#[test]
fn understated_depth_is_rejected() {
    let mut b = golden();
    let c = b.identities.claims.iter_mut().find(|c| c.label == "lambda-bayx").unwrap();
    c.depth = 0;
    rejected(&b, "identities");
}

#[test]
fn dropped_proof_step_is_rejected() {
    let mut b = golden();
    let branch = &mut b.lemma.tree.branches[1];
    branch.steps.remove(3);
    rejected(&b, "lemma");
}

#[test]
fn survived_claim_on_a_dead_case_is_rejected() {
    let mut b = golden();
    b.lemma.tree.branches[0].outcome = OutcomeWire::Survived;
    b.lemma.surviving = 3;
    b.lemma.contradictory = 1;
    rejected(&b, "lemma");
}

#[test]
fn edited_nontriviality_note_is_rejected() {
    let mut b = golden();
    b.lemma.tree.nontriviality[1] = "b is nontrivial".into();
    rejected(&b, "lemma");
}

#[test]
fn corrupted_coset_table_is_rejected() {
    let mut b = golden();
    let row = &mut b.quotient.table[0];
    assert_ne!(row[0], row[2]);
    row.swap(0, 2);
    rejected(&b, "quotient");
}

#[test]
fn wrong_cyclic_flag_is_rejected() {
    let mut b = golden();
    b.quotient.cyclic = false;
    rejected(&b, "quotient");
}

#[test]
fn flipped_verdict_is_rejected() {
    let mut b = golden();
    let v = b.verdicts.as_mut().unwrap();
    let five = v.iter_mut().find(|e| e.slope == "5/1").unwrap();
    five.verdict = "NOT_ORDERABLE".into();
    rejected(&b, "verdicts");
}

#[test]
fn wrong_witness_is_rejected() {
    let mut b = golden();
    let v = b.verdicts.as_mut().unwrap();
    v[0].peripheral_survives.as_mut().unwrap().n = 2;
    rejected(&b, "verdicts");
}

#[test]
fn dropped_verdict_is_rejected() {
    let mut b = golden();
    b.verdicts.as_mut().unwrap().pop();
    rejected(&b, "verdicts");
}
