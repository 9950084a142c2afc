import java.io.File;
import java.io.IOException;
import java.nio.charset.StandardCharsets;

public class Main {
    static String loadConfig(File file) throws IOException {
        return FileUtils.readFileToString(file, StandardCharsets.UTF_8);
    }

    public static void main(String[] args) throws IOException {
        System.out.println(loadConfig(new File("app.conf")));
    }
}
