//! Runs every verification task at small parameters and prints the status.

use ternary::verify::{run, Task, TaskOptions};

fn main() -> ternary::Result<()> {
    let options = TaskOptions { nmax: Some(60), kmax: Some(20), bound: Some(2000), samples: Some(2), ..Default::default() };
    for task in Task::ALL {
        let report = run(task, &options)?;
        println!("{:24} {:?} ({} cases, {} ms)", report.task, report.status, report.details.len(), report.runtime_ms);
    }
    Ok(())
}
