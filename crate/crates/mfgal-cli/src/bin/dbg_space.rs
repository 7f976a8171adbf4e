use mfgal::chartools::DirichletCharacter;
use mfgal::linalg::{self, CycloField};
use mfgal_cli::spaces::*;

fn main() {
    let eps = DirichletCharacter::trivial(5);
    let cands = candidates_for(5, 6, &eps, 2, 200);
    println!("candidates: {}", cands.len());
    let exp: Vec<_> = cands.iter().map(|c| c.expand(30)).collect();
    // rank of the candidate span
    let rows: Vec<Vec<mfgal::cyclo::CycloNum>> =
        exp.iter().map(|e| e.coeffs().to_vec()).collect();
    println!("span rank: {}", linalg::rank(&CycloField, rows));
    for &q in &[1u64, 5] {
        let row: Vec<_> = cands.iter().map(|c| c.wq_constant_term(q, 5)).collect();
        let nonzero = row.iter().filter(|c| !c.is_zero()).count();
        println!("Q={}: nonzero condition entries: {}/{}", q, nonzero, row.len());
    }
    let space = cusp_space(5, 6, &eps, 40, 2, 200);
    println!("cusp basis dim: {}", space.basis.len());
    for b in &space.basis {
        println!("  val {:?} a1..a4: {} {} {} {}", b.valuation(), b.coeff(1), b.coeff(2), b.coeff(3), b.coeff(4));
    }
}
