public class Main extends Application {
    @Override
    public void start(Stage stage) {
        Label greeting = new Label("Hello, JavaFX");
        stage.setScene(new Scene(new StackPane(greeting), 320, 200));
        stage.setTitle("Greeter");
        stage.show();
    }

    public static void main(String[] args) {
        launch(args);
    }
}
