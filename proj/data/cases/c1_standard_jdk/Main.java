public class Main {
    static List<String> splitWords(String line) {
        List<String> words = new ArrayList<>();
        for (String w : line.split("\\s+")) {
            if (!w.isEmpty()) {
                words.add(w);
            }
        }
        return words;
    }

    public static void main(String[] args) {
        System.out.println(splitWords("alpha beta  gamma"));
    }
}
