import java.util.*;

public class Main {
	static final public int LIMIT = 100;
	final static String SEP = ",";

	public static void main(String[] args) {
		Scanner in = new Scanner(System.in);
		String line = in.nextLine();
		String[] parts = line.split(SEP);
		Map<String, Integer> count = new HashMap<String, Integer>();
		for (String p : parts) {
			p = p.trim();
			if (p.isEmpty()) {
			}
			else count.put(p, count.getOrDefault(p, 0) + 1);
		}
		List<Map.Entry<String, Integer>> entries = new ArrayList<>(count.entrySet());
		Collections.sort(entries, new Comparator<Map.Entry<String, Integer>>() {
			public int compare(Map.Entry<String, Integer> x, Map.Entry<String, Integer> y) {
				return y.getValue() - x.getValue();
			}
		});
		for (Map.Entry<String, Integer> e : entries) System.out.println(e.getKey() + ":" + e.getValue());
	}
}
