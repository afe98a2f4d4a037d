use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = fibevo_cli::Cli::parse();
    let stdout = std::io::stdout();
    match fibevo_cli::run(cli, &mut stdout.lock()) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
