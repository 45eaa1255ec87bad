fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SKL_LOG")).init();
    let code = signed_kl::cli::dispatch(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
