import java.util.Scanner;

public class Main {
  static class Node<T extends Comparable<T>> {
    T value;
    Node<T> left;
    Node<T> right;

    Node(T value) {
      this.value = value;
    }
  }

  static <T extends Comparable<T>> Node<T> insert(Node<T> root, T v) {
    if (root == null) {
      return new Node<>(v);
    }
    if (v.compareTo(root.value) < 0) {
      root.left = insert(root.left, v);
    } else {
      root.right = insert(root.right, v);
    }
    return root;
  }

  static <T extends Comparable<T>> void inorder(Node<T> n, StringBuilder sb) {
    if (n == null) {
      return;
    }
    inorder(n.left, sb);
    sb.append(n.value).append(' ');
    inorder(n.right, sb);
  }

  public static void main(String[] args) {
    Scanner in = new Scanner(System.in);
    int n = in.nextInt();
    Node<Integer> root = null;
    for (int i = 0; i < n; i++) {
      root = insert(root, in.nextInt());
    }
    StringBuilder sb = new StringBuilder();
    inorder(root, sb);
    System.out.println(sb.toString().trim());
  }
}
