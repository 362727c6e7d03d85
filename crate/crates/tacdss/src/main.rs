fn main() {
    if let Err(e) = tacdss::cli::run(std::env::args_os()) {
        if e.code == 0 {
            print!("{}", e.message);
        } else {
            eprintln!("{}", e.message.trim_end());
        }
        std::process::exit(e.code);
    }
}
