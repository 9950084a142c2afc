import java.util.Map;

public class Main {
    static String toJson(Map<String, Object> values) {
        Gson gson = new Gson();
        return gson.toJson(values);
    }

    static String escapeForHtml(String raw) {
        return StringEscapeUtils.escapeHtml4(raw);
    }

    public static void main(String[] args) {
        System.out.println(escapeForHtml(toJson(Map.of("name", "<b>Ada</b>"))));
    }
}
