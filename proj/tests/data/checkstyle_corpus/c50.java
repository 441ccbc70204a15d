import java.io
    .BufferedReader;
import java.io.IOException;
import java.io.InputStreamReader;

public class Main {
  public static void main(String[] args) throws IOException
  {
  long limit = 48705l;
  BufferedReader br=new BufferedReader(new InputStreamReader(System.in));
  String line;
  int lineNo = 0;
  while ((line = br.readLine()) != null)
  {
    lineNo++;
    if (line.isEmpty())
    {
    continue;
    }
    String reversed=new StringBuilder(line).reverse().toString(); // this line carries an explanation that keeps going well past the column limit
    System.out.println(lineNo + ": " + reversed + (line.equals(reversed) ? " (palindrome)" : ""));
  }
  try
  {
    br.close();
  }
  catch (IOException e) {
  }
  }
}
