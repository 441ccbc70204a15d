import java.util.Scanner;
public class Main{
public static void main(String[] args){
Scanner sc=new Scanner(System.in);
int n=sc.nextInt();
int[] a=new int[n];
for(int i=0;i<n;i++){a[i]=sc.nextInt();}
for(int i=0;i<n-1;i++){
for(int j=0;j<n-1-i;j++){
if(a[j]>a[j+1]){int t=a[j];a[j]=a[j+1];a[j+1]=t;}
}
}
for(int i=0;i<n;i++){
if(i!=0)System.out.print(" ");
System.out.print(a[i]);
}
}
}
