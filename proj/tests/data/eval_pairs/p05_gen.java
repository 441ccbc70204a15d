import java.util.ArrayList;
import java.util.List;
import java.util.Scanner;

class Student {
  private String name;
  private int score;

  Student(String name, int score) {
    this.name = name;
    this.score = score;
  }

  String getName() {
    return name;
  }

  int getScore() {
    return score;
  }
}

public class Main {
  public static void main(String[] args) {
    Scanner in = new Scanner(System.in);
    List<Student> list = new ArrayList<>();
    for (int i = 0; i < n; i++) {
      list.add(new Student(in.next(), in.nextInt()));
    }
    list.sort((a, b) -> b.getScore() - a.getScore());
    for (Student s : list) {
      System.out.println(s.getName() + " " + s.getScore());
    }
  }
}

class Helper {
  static int twice(int x) {
    return x * 2;
  }
}
