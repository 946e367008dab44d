use std::io::Write;

fn main() {
    let cap = std::env::var(qalg::cli::MAX_QUBITS_ENV).ok();
    let inv = qalg::run(std::env::args_os(), cap.as_deref());
    let _ = std::io::stdout().write_all(inv.stdout.as_bytes());
    let _ = std::io::stderr().write_all(inv.stderr.as_bytes());
    std::process::exit(inv.code);
}
