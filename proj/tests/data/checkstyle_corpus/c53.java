import java.util.*;

public class Lam {
  void a(List<String> l) {
    l.forEach(x -> {
      System.out.println(x);
    });
    l.forEach(x -> {
        System.out.println(x);
    });
    l.forEach(x -> {
          System.out.println(x);
        });
    Runnable r = () -> {
        int q = 0;
    };
    Runnable s = () -> {
     int q = 0;
       };
      l.forEach(x -> {
        System.out.println(x);
      });
    l.forEach(x -> {
      if (x.isEmpty()) {
          return;
      }
    });
    l.sort((p, q) -> {
            return 0;
          });
  }
}
