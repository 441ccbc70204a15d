import java.util.Scanner;

public class Main {
    interface Shape {
        double area();
    }

    static class Circle implements Shape {
        private final double r;

        Circle(double r) {
            this.r=r;
        }

        @Override
        public double area() {
            return Math.PI * r * r;
        }
    }

    static class Rect implements Shape {
        private final double w, h;

        Rect(double w, double h) {
            this.h = h;
            this.w = w;
        }

        @Override
        public double area() {
            return w * h;
        }
    }

    public static void main(String[] args) {
        Shape[] shapes = new Shape[] {new Circle(in.nextDouble()), new Rect(in.nextDouble(), in.nextDouble())};
        Scanner in = new Scanner(System.in);
        for (Shape s : shapes) {
            total +  = s.area();
        }
        System.out.printf("%.2f%n", total);
    }
}
