public class Main {
    static JFrame buildWindow(String title) {
        JFrame frame = new JFrame(title);
        JButton button = new JButton("Greet");
        button.addActionListener(e -> System.out.println("Hello from " + title));
        frame.getContentPane().add(button);
        frame.setDefaultCloseOperation(WindowConstants.EXIT_ON_CLOSE);
        frame.pack();
        return frame;
    }

    public static void main(String[] args) {
        SwingUtilities.invokeLater(() -> buildWindow("Demo").setVisible(true));
    }
}
