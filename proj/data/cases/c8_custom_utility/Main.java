import java.util.List;

public class Main {
    static List<String> cleanNames(List<String> names) {
        return names.stream().map(MySpecialUtils::normalize).toList();
    }

    public static void main(String[] args) {
        System.out.println(cleanNames(List.of("  Ada ", "GRACE")));
        System.out.println(MySpecialUtils.normalize("  Linus  "));
    }
}
