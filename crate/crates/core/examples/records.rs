//! Saving solutions as JSON records and loading them back without
//! re-running the search.

use twocenter::matching::{self, SolveOptions};
use twocenter::record::{self, SolutionRecord};
use twocenter::scalar::rational;
use twocenter::separation::CenterPair;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let centers = CenterPair::new(rational(5, 1), rational(1, 1))?;
    let sols = matching::solve(&centers, &SolveOptions { n_max: 3, ..SolveOptions::default() })?;
    let recs: Vec<SolutionRecord> = sols.iter().map(|s| SolutionRecord::from_solution(s, None)).collect();

    let mut json = Vec::new();
    record::write_records(&recs, &mut json)?;
    println!("{}", String::from_utf8_lossy(&json));

    for rec in record::read_records(json.as_slice())? {
        let sol = rec.to_solution()?;
        println!("reloaded R = {} E = {}, Psi(0.5, 0.5) = {:.6e}", sol.r(), sol.energy, twocenter::eval::evaluate_psi(&sol, 0.5, 0.5));
    }
    Ok(())
}
