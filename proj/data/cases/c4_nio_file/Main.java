public class Main {
    static long countLines(String name) throws IOException {
        Path path = Paths.get(name);
        return Files.readAllLines(path).size();
    }

    public static void main(String[] args) throws IOException {
        System.out.println(countLines(args.length > 0 ? args[0] : "input.txt"));
    }
}
