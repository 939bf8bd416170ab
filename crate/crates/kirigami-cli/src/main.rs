fn main() {
    println!("kirigami");
}
