public class Main {
    static int currentYear() {
        Date now = new Date();
        return now.getYear() + 1900;
    }

    public static void main(String[] args) {
        System.out.println("Year: " + currentYear());
    }
}
